#include <doctest.h>

#include "sexp.hpp"

#include "affop/screening.hpp"

#include <random>

using namespace affop;
using sx::Sexp;

namespace {

Sexp random_tree(std::mt19937& rng, int depth) {
    static const std::vector<std::string> atoms{"b", "-3/7", "z", "(1)/(z - 2)", "with space", "quote\"d", "back\\slash", "+", "0"};
    if (depth == 0 || rng() % 3 == 0) return Sexp::sym(atoms[rng() % atoms.size()]);
    Sexp l = Sexp::list();
    const int n = static_cast<int>(rng() % 4);
    for (int k = 0; k < n; ++k) l.items.push_back(random_tree(rng, depth - 1));
    return l;
}

RatFunc random_ratfunc(std::mt19937& rng) {
    auto rq = [&] { return frac(static_cast<long>(rng() % 7) - 3, static_cast<long>(rng() % 3) + 1); };
    return RatFunc(rq()) + RatFunc(rq()) * RatFunc::z() + RatFunc(rq()) * RatFunc::pole(Q(1), 2) + RatFunc(rq()) * RatFunc::pole(frac(-1, 2), 1);
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("s-expressions re-parse to equal values") {
        std::mt19937 rng(1);
        for (int t = 0; t < 200; ++t) {
            const Sexp s = random_tree(rng, 4);
            CHECK(sx::parse(sx::print(s)) == s);
        }
        CHECK(sx::print(sx::parse("  (a (b  c) \"d e\" ())  ")) == "(a (b c) \"d e\" ())");
        for (const char* bad : {"", "(", ")", "(a))", "\"open", "(a) b"}) CHECK_THROWS_AS(sx::parse(bad), Error);
    }

    TEST_CASE("states and sections round-trip through the section grammar") {
        std::mt19937 rng(2);
        for (const char* ty : {"A1^1", "A2^1"}) {
            CartanData cd = build_cartan(ty);
            for (int g = 0; g <= 3; ++g)
                for (const Mono& m : all_monomials(cd, g)) {
                    CState v = CState::monomial(cd.zero(), m, frac(static_cast<long>(rng() % 9) - 4, 1 + rng() % 3));
                    const Sexp e = sx::state_expr(v);
                    CHECK(sx::parse(sx::print(e)) == e);
                    GlobalSection want;
                    want.add(v, RatFunc(Q(1)));
                    CHECK(sx::section_from_expr(cd, sx::parse(sx::print(e)), 0) == want);
                }
            const auto mons = all_monomials(cd, 2);
            for (int t = 0; t < 20; ++t) {
                GlobalSection s;
                s.j = t % 3;
                for (int k = 0; k < 3; ++k) s.add(mons[rng() % mons.size()], random_ratfunc(rng));
                const Sexp e = sx::section_expr(s);
                CHECK(sx::parse(sx::print(e)) == e);
                CHECK(sx::section_from_expr(cd, sx::parse(sx::print(e)), s.j) == s);
            }
        }
    }

    TEST_CASE("section expressions") {
        CartanData cd = build_cartan("A1^1");
        auto eval = [&](const std::string& t) { return sx::section_from_expr(cd, sx::parse(t), 1); };
        const Mono b0 = Mono(1, mode_code(0, -1)), b2 = Mono(1, mode_code(2, -2));
        GlobalSection want;
        want.j = 1;
        want.add(mono_mul(b0, b0), RatFunc(frac(1, 2)) * RatFunc::pole(Q(0), 1));
        want.add(b2, RatFunc::z() - RatFunc(Q(1)));
        CHECK(eval("(+ (* 1/2 (^ (b 0 -1) 2) (pole 0 1)) (* (- z 1) (b 2 -2)))") == want);
        CHECK(eval("(* (/ 1 z) (b 0 -1))") == eval("(* \"(1)/(z)\" (b 0 -1))"));
        CHECK(eval("(- (b 0 -1) (b 0 -1))").is_zero());
        for (const char* bad : {"(b 3 -1)", "(b 0 1)", "(/ 1 (b 0 -1))", "(/ 1 0)", "(^ z -1)", "(frob 1)", "(pole 0 0)", "(b x -1)"})
            CHECK_THROWS_AS(eval(bad), Error);
    }

    TEST_CASE("structured renderings") {
        const Sexp r = sx::record("cartan", {sx::field("h", sx::num(2L)), sx::field("exponents", Sexp::list({sx::num(1L), sx::num(3L)}))});
        CHECK(sx::print(r) == "(cartan (h 2) (exponents (1 3)))");
        CHECK(sx::to_json(r, -1) == R"({"_":"cartan","h":"2","exponents":["1","3"]})");
        CHECK(sx::to_pretty(r) == "cartan\n  h = 2\n  exponents = (1 3)\n");
        CHECK(sx::print(sx::num(frac(-3, 7))) == "-3/7");
        CHECK(sx::print(sx::vector_expr(CartanVector(QVec{Q(1), frac(1, 2)}))) == "(vec 1 1/2)");
    }
}
