#include <doctest.h>

#include "affop/iom.hpp"
#include "affop/linalg.hpp"
#include "affop/screening.hpp"

#include <algorithm>

using namespace affop;

namespace {

long multiplicity(const CartanData& cd, int j) {
    auto e = exponents(cd, j);
    return std::count(e.begin(), e.end(), j);
}

// Is v ∈ T^(aff)(all of π₀ at grade g−1) + span(extra)?
bool exact_up_to(const FockContext& fc, const CState& v, int g) {
    const std::vector<Mono> out = all_monomials(*fc.cd, g);
    QMat cols;
    for (const Mono& m : all_monomials(*fc.cd, g - 1)) cols.push_back(coords(t_aff(fc, CState::monomial(fc.cd->zero(), m)), out));
    return solve(transpose(cols, static_cast<int>(out.size())), coords(v, out), static_cast<int>(cols.size())).has_value();
}

}  // namespace

TEST_SUITE("iom") {
    TEST_CASE("class counts match exponent multiplicities") {
        CartanData cd = build_cartan("A1^1");
        FockContext fc(cd);
        for (int j = 1; j <= 5; ++j) CHECK(static_cast<long>(iom_density(fc, j).size()) == multiplicity(cd, j));
        CHECK(iom_density(fc, 2).empty());
        CartanData a2 = build_cartan("A2^1");
        FockContext f2(a2);
        for (int j = 1; j <= 4; ++j) CHECK(static_cast<long>(iom_density(f2, j).size()) == multiplicity(a2, j));
        CartanData c2 = build_cartan("C2^1");
        FockContext f3(c2);
        for (int j = 1; j <= 3; ++j) CHECK(static_cast<long>(iom_density(f3, j).size()) == multiplicity(c2, j));
    }

    TEST_CASE("first density is the conformal vector up to exact terms") {
        for (const char* t : {"A1^1", "A2^1", "C2^1"}) {
            CartanData cd = build_cartan(t);
            FockContext fc(cd);
            auto cls = iom_density(fc, 1);
            REQUIRE(cls.size() == 1);
            CState w = conformal_vector_classical(fc, -cd.rho_check);
            for (const CState& x : hamiltonian(fc, w)) CHECK(x.is_zero());
            // ω̄ − κ v₁ is T^(aff)-exact for a unique κ ≠ 0
            const std::vector<Mono> top = all_monomials(cd, 2);
            QMat cols;
            cols.push_back(coords(cls[0].rep, top));
            for (const Mono& m : all_monomials(cd, 1)) cols.push_back(coords(t_aff(fc, CState::monomial(cd.zero(), m)), top));
            auto x = solve(transpose(cols, static_cast<int>(top.size())), coords(w, top), static_cast<int>(cols.size()));
            REQUIRE(x.has_value());
            CHECK((*x)[0] != 0);
            CHECK_FALSE(exact_up_to(fc, cls[0].rep, 2));
        }
    }

    TEST_CASE("verification of classes") {
        CartanData cd = build_cartan("A1^1");
        FockContext fc(cd);
        for (int j : {1, 3, 5}) {
            auto cls = iom_density(fc, j);
            REQUIRE(cls.size() == 1);
            const IomClass& c = cls[0];
            CHECK(c.tag == "reduced");
            // lexicographically least monomial has coefficient one
            CHECK(c.rep.terms.begin()->second == 1);
            IomReport r = verify_class(fc, c);
            CHECK(r.tag == "reduced");
            CHECK(r.checks.size() == 6);

            IomClass bad = c;
            bad.rep += CState::monomial(cd.zero(), Mono(1, mode_code(static_cast<int>(cd.ell) + 1, -(j + 1))));
            try {
                verify_class(fc, bad);
                FAIL("tampered class accepted");
            } catch (const Error& e) {
                CHECK(e.kind == "FailedInvariant");
                CHECK(std::string(e.what()).find("membership_aff") != std::string::npos);
            }

            // adding T^(aff) f for a primary f in the aff subspace keeps the class
            for (const CState& f : aff_basis(fc, j)) {
                IomClass sh = c;
                sh.rep += t_aff(fc, f);
                for (size_t i = 0; i < cd.nodes(); ++i)
                    sh.witnesses[i] += retag(screening_classical(fc, cd.root[i], f), cd.root[i]);
                IomReport rs = verify_class(fc, sh);
                CHECK(rs.tag == "shifted");
            }

            IomClass badw = c;
            badw.witnesses[0] += CState::monomial(cd.root[0], j > 1 ? Mono(1, mode_code(0, -(j - 1))) : Mono());
            CHECK_THROWS_AS(verify_class(fc, badw), Error);
        }
    }

    TEST_CASE("double complex on the aff subspace") {
        CartanData cd = build_cartan("A1^1");
        FockContext fc(cd);
        for (int g = 0; g <= 6; ++g)
            for (const CState& v : aff_basis(fc, g)) {
                auto h1 = hamiltonian(fc, t_aff(fc, v));
                auto h2 = hamiltonian(fc, v);
                for (size_t i = 0; i < h1.size(); ++i) CHECK((-h1[i] + t_aff(fc, h2[i])).is_zero());
            }
    }

    TEST_CASE("representatives for A2") {
        CartanData cd = build_cartan("A2^1");
        FockContext fc(cd);
        for (int j : {1, 2}) {
            auto cls = iom_density(fc, j);
            REQUIRE(cls.size() == 1);
            CHECK(verify_class(fc, cls[0]).tag == "reduced");
        }
    }

    TEST_CASE("exponent of multiplicity two") {
        CartanData cd = build_cartan("D4^1");
        FockContext fc(cd);
        CHECK(multiplicity(cd, 3) == 2);
        auto cls = iom_density(fc, 3);
        REQUIRE(cls.size() == 2);
        for (const IomClass& c : cls) CHECK(verify_class(fc, c).tag == "reduced");
        CHECK(iom_density(fc, 2).empty());
    }
}
