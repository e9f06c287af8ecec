#include <doctest.h>

#include "affop/canonical.hpp"
#include "affop/screening.hpp"

using namespace affop;

namespace {

CState vac(const CartanData& cd) { return CState::vacuum(cd.zero()); }
CState poly(const CartanVector& a, int n) { return mode_poly<Q>(a, n); }

FinElement fin_mono(const CartanData& cd, std::initializer_list<std::pair<int, int>> modes) {
    Mono m;
    for (auto [j, n] : modes) m = mono_insert(m, mode_code(j, n));
    return FinElement::monomial(cd.zero(), m);
}

// Monomials of grade ≤ N in π_λ.
std::vector<CState> states(const CartanData& cd, int N, const CartanVector& w) {
    std::vector<CState> out;
    for (int g = 0; g <= N; ++g)
        for (const Mono& m : all_monomials(cd, g)) out.push_back(CState::monomial(w, m));
    return out;
}

}  // namespace

TEST_SUITE("canonical") {
    TEST_CASE("canonical translation against the composition sum") {
        for (const char* t : {"A1^1", "A2^1", "C2^1"}) {
            CartanData cd = build_cartan(t);
            FockContext fc(cd);
            const int N = std::string(t) == "A1^1" ? 4 : 3;
            for (const CState& v : states(cd, N, cd.zero())) CHECK(t_aff(fc, v) == t_aff_enumerated(fc, v));
            for (const CState& v : states(cd, 2, cd.root[1])) CHECK(t_aff(fc, v) == t_aff_enumerated(fc, v));
        }
    }

    TEST_CASE("canonical translation examples") {
        for (const char* t : {"A1^1", "A2^1", "B3^1", "D4^1"}) {
            CartanData cd = build_cartan(t);
            FockContext fc(cd);
            CHECK(t_aff(fc, vac(cd)).is_zero());
            CHECK(t_aff(fc, poly(cd.delta, -1)).is_zero());
            CHECK_THROWS_AS(t_aff(fc, CState::vacuum(cd.rho_check)), Error);
            try {
                t_aff(fc, CState::vacuum(cd.rho_check));
            } catch (const Error& e) {
                CHECK(e.kind == "WeightNotIsotropic");
            }
            // a primary of weight Δ: T^(aff) v = L_{−1} v − (Δ/h) δ_{−1} v
            const CartanVector xi = -cd.rho_check;
            for (int g = 1; g <= 2; ++g)
                for (const CState& v : aff_basis(fc, g)) {
                    CState want = virasoro_classical(fc, -1, xi, v) - frac(g, cd.h) * multiply(poly(cd.delta, -1), v);
                    CHECK(t_aff(fc, v) == want);
                }
        }
    }

    TEST_CASE("canonical modes") {
        CartanData cd = build_cartan("A2^1");
        FockContext fc(cd);
        for (int n = 2; n <= 5; ++n) CHECK(canonical_mode_poly(fc, cd.delta, -n).is_zero());
        CartanVector a = cd.coroot[2] + frac(1, 3) * cd.rho_check;
        CHECK(canonical_mode_poly(fc, a, -1) == poly(a, -1));
        CHECK(canonical_mode(fc, a, -1, vac(cd)) == poly(a, -1));
        CHECK_THROWS_AS(canonical_mode_poly(fc, a, 0), Error);
        // α̃_{i,[−2]} = α̃_{i,−2} − (1/h) δ_{−1} α̃_{i,−1} (the primary-state formula at weight one)
        const Q ih = frac(1, cd.h);
        for (size_t i = 0; i < cd.nodes(); ++i) {
            CartanVector at = cd.root_tilde(i);
            CState two = poly(at, -2) - ih * multiply(poly(cd.delta, -1), poly(at, -1));
            CHECK(canonical_mode_poly(fc, at, -2) == two);
            CState expanded = poly(cd.root[i], -2) - ih * poly(cd.delta, -2) - ih * multiply(poly(cd.delta, -1), poly(cd.root[i], -1)) +
                              ih * ih * multiply(poly(cd.delta, -1), poly(cd.delta, -1));
            CHECK(two == expanded);
            for (size_t j = 0; j < cd.nodes(); ++j) {
                CState v = canonical_mode(fc, at, -2, canonical_mode(fc, cd.root_tilde(j), -1, vac(cd)));
                CHECK(v == multiply(two, poly(cd.root_tilde(j), -1)));
            }
        }
    }

    TEST_CASE("canonical translation commutes with positive Virasoro modes") {
        for (const char* t : {"A1^1", "A2^1"}) {
            CartanData cd = build_cartan(t);
            FockContext fc(cd);
            const CartanVector xi = -cd.rho_check;
            for (const CartanVector& w : {cd.zero(), cd.root[0], cd.root[1]}) {
                for (const CState& v : states(cd, 3, w)) {
                    for (int j = 1; j <= 4; ++j) {
                        CState lhs = virasoro_classical(fc, j, xi, t_aff(fc, v));
                        CState rhs = t_aff(fc, virasoro_classical(fc, j, xi, v));
                        CHECK(lhs == rhs);
                    }
                    // rescaling s ↦ c s acts by c^{−L0}; conjugation multiplies T^(aff) by 1/c
                    CoordChange sc = aut_O_decompose({Q(3)}, 1);
                    CState lhs = aut_O_act(fc, sc, t_aff(fc, v), xi);
                    CState rhs = frac(1, 3) * t_aff(fc, aut_O_act(fc, sc, v, xi));
                    CHECK(lhs == rhs);
                }
            }
        }
    }

    TEST_CASE("decorated states are primaries") {
        for (const char* t : {"A1^1", "A2^1", "C2^1"}) {
            CartanData cd = build_cartan(t);
            FockContext fc(cd);
            const CartanVector xi = -cd.rho_check;
            for (int g = 0; g <= 3; ++g)
                for (const CState& v : aff_basis(fc, g)) {
                    for (int j = 1; j <= g + 1; ++j) CHECK(virasoro_classical(fc, j, xi, v).is_zero());
                    CHECK(virasoro_classical(fc, 0, xi, v) == Q(g) * v);
                }
        }
    }

    TEST_CASE("decoration") {
        CartanData cd = build_cartan("A2^1");
        FockContext fc(cd);
        CHECK(decorate(fc, FinElement::vacuum(cd.zero())) == vac(cd));
        for (int j = 1; j <= cd.ell; ++j) CHECK(decorate(fc, fin_mono(cd, {{j, -1}})) == poly(cd.root_tilde(j), -1));
        CState dec = decorate(fc, fin_mono(cd, {{1, -2}, {2, -1}}));
        CHECK(dec == multiply(canonical_mode_poly(fc, cd.root_tilde(1), -2), poly(cd.root_tilde(2), -1)));
        // [α_0] = −(1/a_0) Σ a_j [α_j]: decorating the class of α_0 gives α̃_0
        FinElement a0 = FinElement(cd.zero());
        CartanVector x = fin_class(cd, 0);
        for (int j = 1; j <= cd.ell; ++j) a0 += x[j] * fin_mono(cd, {{j, -1}});
        CHECK(decorate(fc, a0) == poly(cd.root_tilde(0), -1));
        CHECK_THROWS_AS(decorate(fc, fin_mono(cd, {{0, -1}})), Error);
    }

    TEST_CASE("membership in the aff subspace") {
        for (const char* t : {"A1^1", "A2^1"}) {
            CartanData cd = build_cartan(t);
            FockContext fc(cd);
            // Σ a_i α̃_i = 0, so the α̃_{i,−1} span a complement of δ_{−1} in grade one
            CHECK_FALSE(membership_aff(fc, poly(cd.delta, -1)).member);
            auto d = membership_aff(fc, poly(cd.root_tilde(0), -1));
            CHECK(d.member);
            CHECK(decorate(fc, d.coords) == poly(cd.root_tilde(0), -1));
            CHECK_FALSE(membership_aff(fc, poly(cd.rho_check, -1)).member);
            CHECK_FALSE(membership_aff(fc, poly(cd.rho_check, -2)).member);
            for (int g = 0; g <= 3; ++g)
                for (const Mono& m : fin_monomials(cd, g)) {
                    FinElement f = FinElement::monomial(cd.zero(), m, frac(2, 7));
                    auto r = membership_aff(fc, decorate(fc, f));
                    CHECK(r.member);
                    CHECK(r.coords == f);
                }
            // aff subspace has the size of the reduced Fock space
            for (int g = 0; g <= 3; ++g) CHECK(aff_basis(fc, g).size() == fin_monomials(cd, g).size());
        }
    }

    TEST_CASE("canonical translation and screening flows") {
        for (const char* t : {"A1^1", "A2^1", "C2^1"}) {
            CartanData cd = build_cartan(t);
            FockContext fc(cd);
            for (size_t i = 0; i < cd.nodes(); ++i) {
                CState at = poly(cd.root_tilde(i), -1);
                for (const CState& v : states(cd, 3, cd.zero())) {
                    CState lhs = t_aff(fc, q_flow(fc, i, v)) - q_flow(fc, i, t_aff(fc, v));
                    CHECK(lhs == -multiply(at, q_flow(fc, i, v)));
                }
            }
        }
    }

    TEST_CASE("decoration intertwines the screening flows") {
        for (const char* t : {"A1^1", "A2^1", "C2^1", "A3^1"}) {
            CartanData cd = build_cartan(t);
            FockContext fc(cd);
            const int N = std::string(t) == "A3^1" ? 2 : 4;
            for (int g = 0; g <= N; ++g)
                for (const Mono& m : fin_monomials(cd, g)) {
                    FinElement f = FinElement::monomial(cd.zero(), m);
                    CState d = decorate(fc, f);
                    for (size_t i = 0; i < cd.nodes(); ++i) CHECK(decorate(fc, fin_q(fc, i, f)) == q_flow(fc, i, d));
                }
        }
    }

    TEST_CASE("vertical complex") {
        CartanData cd = build_cartan("A2^1");
        FockContext fc(cd);
        for (const CState& v : states(cd, 3, cd.zero())) {
            CHECK(t_aff(fc, v).coeff(Mono()) == 0);
            auto h1 = hamiltonian(fc, t_aff(fc, v));
            auto h2 = hamiltonian(fc, v);
            for (size_t i = 0; i < h1.size(); ++i) CHECK(h1[i] == t_aff(fc, h2[i]));
        }
    }
}
