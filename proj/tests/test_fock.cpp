#include <doctest.h>

#include "affop/fock.hpp"

#include <random>

using namespace affop;

namespace {

Mono mono(std::initializer_list<std::pair<int, int>> modes) {
    Mono m;
    for (auto [i, n] : modes) m = mono_insert(m, mode_code(i, n));
    return m;
}

std::vector<Mono> all_monomials(const CartanData& cd, int g) {
    std::vector<int> cols;
    for (size_t j = 0; j < cd.dim(); ++j) cols.push_back(static_cast<int>(j));
    return monomials_of_grade(cols, g);
}

QState qmono(const CartanData& cd, const Mono& m, CartanVector w = {}) {
    if (w.size() == 0) w = cd.zero();
    return QState::monomial(w, m);
}

// Number of multisets of modes with total grade g in `colours` colours: coefficient of q^g in ∏(1−q^k)^{−colours}.
long coloured_partitions(int colours, int g) {
    std::vector<long> p(g + 1, 0);
    p[0] = 1;
    for (int c = 0; c < colours; ++c)
        for (int k = 1; k <= g; ++k)
            for (int n = k; n <= g; ++n) p[n] += p[n - k];
    return p[g];
}

}  // namespace

TEST_SUITE("fock") {
    TEST_CASE("monomial enumeration matches coloured partition counts") {
        for (int g = 0; g <= 6; ++g) {
            CHECK(static_cast<long>(monomials_of_grade({0, 1, 2}, g).size()) == coloured_partitions(3, g));
            CHECK(static_cast<long>(monomials_of_grade({0, 1, 2, 3}, g).size()) == coloured_partitions(4, g));
        }
    }

    TEST_CASE("Heisenberg modes") {
        CartanData cd = build_cartan("A2^1");
        FockContext fc(cd);
        // b^i_1 b_{j,-1}|0> = ε δ^i_j |0>
        for (size_t i = 0; i < cd.dim(); ++i)
            for (size_t j = 0; j < cd.dim(); ++j) {
                CartanVector bi(fc.ginv[i]);
                QState r = apply_mode(fc, bi, 1, qmono(cd, mono({{int(j), -1}})));
                QState want(cd.zero());
                if (i == j) want = EpsScalar::eps(1) * QState::vacuum(cd.zero());
                CHECK(r == want);
            }
        CartanVector lam = cd.rho + Q(2) * cd.coroot[1];
        QState vac = QState::vacuum(lam);
        CHECK(apply_mode(fc, cd.coroot[0], 5, vac).is_zero());
        QState z = apply_mode(fc, cd.coroot[0], 0, vac);
        CHECK(z == EpsScalar::eps(1, cd.bilin(lam, cd.coroot[0])) * vac);
        // [a_m, c_n] = ε m (a, c) δ_{m+n,0} on a random monomial
        Mono m = mono({{0, -1}, {2, -2}, {3, -1}});
        CartanVector a = cd.coroot[2] + Q(3) * cd.rho_check, c = cd.coroot[0] - cd.rho_check;
        for (int p = -3; p <= 3; ++p)
            for (int q = -3; q <= 3; ++q) {
                if (p == 0 || q == 0) continue;
                QState v = qmono(cd, m);
                QState lhs = apply_mode(fc, a, p, apply_mode(fc, c, q, v)) - apply_mode(fc, c, q, apply_mode(fc, a, p, v));
                QState rhs(cd.zero());
                if (p + q == 0) rhs = EpsScalar::eps(1, Q(p) * cd.bilin(a, c)) * v;
                CHECK(lhs == rhs);
            }
    }

    TEST_CASE("translation") {
        CartanData cd = build_cartan("A1^1");
        CState vac = CState::vacuum(cd.zero());
        CHECK(translate(vac).is_zero());
        CHECK(translate(CState::monomial(cd.zero(), mono({{1, -1}}))) == CState::monomial(cd.zero(), mono({{1, -2}})));
        CartanVector lam = cd.root[1];
        CHECK(translate(CState::vacuum(lam)) == retag(mode_poly<Q>(lam, -1), lam));
    }

    TEST_CASE("conformal weight of the highest-weight vector") {
        CartanData cd = build_cartan("A2^1");
        FockContext fc(cd);
        Xi xi = xi_quantum_default(cd);
        CartanVector lam = cd.root[0] + Q(2) * cd.coroot[2] - frac(1, 3) * cd.rho_check;
        QState r = virasoro(fc, 0, xi, QState::vacuum(lam));
        // mode formula: −(ξ0,λ) − ε(ξ1,λ) + ½ε(λ,λ)
        EpsScalar want = EpsScalar(-cd.bilin(xi.x0, lam)) + EpsScalar::eps(1, cd.bilin(lam, lam) / 2 - cd.bilin(xi.x1, lam));
        CHECK(r == want * QState::vacuum(lam));
    }

    TEST_CASE("conformal vector products") {
        for (const char* t : {"A1^1", "A2^1"}) {
            CartanData cd = build_cartan(t);
            FockContext fc(cd);
            Xi xi = xi_quantum_default(cd);
            QState w = conformal_vector(fc, xi);
            CHECK(nth_product(fc, w, 0, w) == translate(w));
            CHECK(nth_product(fc, w, 1, w) == EpsScalar(2) * w);
            CHECK(nth_product(fc, w, 2, w).is_zero());
            // (ξ,ξ) with ξ = ξ0 + εξ1
            EpsScalar xx = EpsScalar(cd.bilin(xi.x0, xi.x0)) + EpsScalar::eps(1, 2 * cd.bilin(xi.x0, xi.x1)) +
                           EpsScalar::eps(2, cd.bilin(xi.x1, xi.x1));
            EpsScalar c = EpsScalar(Q(long(cd.dim()))) - xx.shifted(-1) * EpsScalar(12);
            CHECK(nth_product(fc, w, 3, w) == c * EpsScalar(frac(1, 2)) * QState::vacuum(cd.zero()));
            CHECK(nth_product(fc, w, 4, w).is_zero());
            // modes of ω are L_n
            for (int g = 0; g <= 3; ++g)
                for (const Mono& m : all_monomials(cd, g))
                    for (int n = -2; n <= 3; ++n) CHECK(nth_product(fc, w, n + 1, qmono(cd, m)) == virasoro(fc, n, xi, qmono(cd, m)));
        }
    }

    TEST_CASE("single-mode fields") {
        CartanData cd = build_cartan("A1^1");
        FockContext fc(cd);
        CartanVector a = cd.coroot[1] + Q(2) * cd.rho_check;
        QState A = lift(mode_poly<Q>(a, -1));
        QState vac = QState::vacuum(cd.zero());
        CHECK(nth_product(fc, A, -1, vac) == A);
        for (int g = 0; g <= 3; ++g)
            for (const Mono& m : all_monomials(cd, g))
                for (int n = -3; n <= 3; ++n) CHECK(nth_product(fc, A, n, qmono(cd, m)) == apply_mode(fc, a, n, qmono(cd, m)));
        // (a_{-2}|0>)_(n) = −n a_{n−1}
        QState A2 = lift(mode_poly<Q>(a, -2));
        for (const Mono& m : all_monomials(cd, 2))
            for (int n = -2; n <= 3; ++n) {
                QState want = apply_mode(fc, a, n - 1, qmono(cd, m));
                want *= EpsScalar(Q(-n));
                CHECK(nth_product(fc, A2, n, qmono(cd, m)) == want);
            }
    }

    TEST_CASE("classical conformal algebra") {
        CartanData cd = build_cartan("A2^1");
        FockContext fc(cd);
        CartanVector xi = cd.rho + Q(2) * cd.coroot[1];  // generic, (ξ,ξ) ≠ 0
        CState w = conformal_vector_classical(fc, xi);
        CHECK(classical_bracket(fc, w, 0, w) == translate(w));
        CHECK(classical_bracket(fc, w, 1, w) == Q(2) * w);
        CHECK(classical_bracket(fc, w, 2, w).is_zero());
        CHECK(classical_bracket(fc, w, 3, w) == Q(-6 * cd.bilin(xi, xi)) * CState::vacuum(cd.zero()));
        CHECK(classical_bracket(fc, w, 4, w).is_zero());
        CState vac = CState::vacuum(cd.zero());
        CState a = mode_poly<Q>(cd.coroot[0], -1);
        CHECK(classical_bracket(fc, a, -1, vac) == a);
        CHECK(classical_bracket(fc, w, -1, a) == multiply(w, a));
        // classical extraction of εω
        QState q = conformal_vector(fc, {xi, cd.rho});
        CHECK(classical_part(q, -1) == w);
        // divergent extraction is refused
        CHECK_THROWS_AS(classical_limit(nth_product(fc, q, 3, q), 0), Error);
        CHECK(classical_limit(nth_product(fc, q, 1, q), -1) == Q(2) * w);
    }

    TEST_CASE("classical Virasoro action") {
        CartanData cd = build_cartan("A2^1");
        FockContext fc(cd);
        CartanVector xi = -cd.rho_check;
        for (size_t j = 0; j < cd.dim(); ++j) {
            CartanVector bj(fc.ginv[j]);
            for (int p = 1; p <= 4; ++p) {
                CState v = mode_poly<Q>(bj, -p);
                for (int n = -1; n <= 5; ++n) {
                    CState r = virasoro_classical(fc, n, xi, v);
                    if (n > p) CHECK(r.is_zero());
                    if (n == p) CHECK(r == Q(-n * (n + 1)) * cd.bilin(xi, bj) * CState::vacuum(cd.zero()));
                    if (n < p) CHECK(r == Q(p) * mode_poly<Q>(bj, n - p));
                }
            }
        }
        // classical action = ε⁰ part of the quantum one for n ≥ −1
        Xi qxi{xi, cd.zero()};
        CartanVector lam = cd.root[1];
        for (int g = 0; g <= 3; ++g)
            for (const Mono& m : all_monomials(cd, g))
                for (int n = -1; n <= 4; ++n) {
                    QState q = virasoro(fc, n, qxi, QState::monomial(lam, m));
                    for (const auto& [mm, c] : q.terms) CHECK(c.low() >= 0);
                    CHECK(classical_part(q) == virasoro_classical(fc, n, xi, CState::monomial(lam, m)));
                }
    }

    TEST_CASE("T equals L_{-1} on the vacuum module") {
        CartanData cd = build_cartan("A2^1");
        FockContext fc(cd);
        Xi xi = xi_quantum_default(cd);
        for (int g = 0; g <= 4; ++g)
            for (const Mono& m : all_monomials(cd, g)) CHECK(virasoro(fc, -1, xi, qmono(cd, m)) == translate(qmono(cd, m)));
    }

    TEST_CASE("Virasoro relations at low grade") {
        CartanData cd = build_cartan("A1^1");
        FockContext fc(cd);
        Xi xi = xi_quantum_default(cd);
        EpsScalar xx = EpsScalar(cd.bilin(xi.x0, xi.x0)) + EpsScalar::eps(1, 2 * cd.bilin(xi.x0, xi.x1)) +
                       EpsScalar::eps(2, cd.bilin(xi.x1, xi.x1));
        EpsScalar c = EpsScalar(Q(long(cd.dim()))) - xx.shifted(-1) * EpsScalar(12);
        for (int g = 0; g <= 3; ++g)
            for (const Mono& m : all_monomials(cd, g))
                for (int n = -3; n <= 3; ++n)
                    for (int k = -3; k <= 3; ++k) {
                        QState v = qmono(cd, m);
                        QState lhs = virasoro(fc, n, xi, virasoro(fc, k, xi, v)) - virasoro(fc, k, xi, virasoro(fc, n, xi, v));
                        QState rhs = virasoro(fc, n + k, xi, v);
                        rhs *= EpsScalar(Q(n - k));
                        if (n + k == 0) rhs += EpsScalar(frac(n * n * n - n, 12)) * c * v;
                        CHECK(lhs == rhs);
                    }
        // classical modes n ≥ −1 never meet the central term
        CartanVector cx = cd.rho + cd.coroot[0];
        for (int g = 0; g <= 3; ++g)
            for (const Mono& m : all_monomials(cd, g))
                for (int n = -1; n <= 3; ++n)
                    for (int k = -1; k <= 3; ++k) {
                        if (n + k < -1) continue;
                        CState v = CState::monomial(cd.zero(), m);
                        CState lhs = virasoro_classical(fc, n, cx, virasoro_classical(fc, k, cx, v)) -
                                     virasoro_classical(fc, k, cx, virasoro_classical(fc, n, cx, v));
                        CState rhs = Q(n - k) * virasoro_classical(fc, n + k, cx, v);
                        CHECK(lhs == rhs);
                    }
    }

    TEST_CASE("Aut O decomposition") {
        auto cc = aut_O_decompose({Q(3)}, 1);
        CHECK(cc.v == QVec{3});
        cc = aut_O_decompose({Q(5), 0, 0, 0, 0}, 5);
        CHECK(cc.v == QVec{5, 0, 0, 0, 0});
        // μ = s/(1 − a s) is the time-one flow of a s²∂_s
        Q a = frac(2, 7);
        QVec mu;
        for (int k = 0; k < 6; ++k) mu.push_back(qpow(a, k));
        cc = aut_O_decompose(mu, 6);
        CHECK(cc.v == QVec{1, a, 0, 0, 0, 0});
        // μ = s(1 − 2b s²)^{−1/2} is the time-one flow of b s³∂_s
        Q b = frac(-3, 5);
        QVec mu2(7);
        for (int k = 0; 2 * k + 1 <= 7; ++k) mu2[2 * k] = binom(2 * k, k) * qpow(b / 2, k);  // (1−4x)^{−1/2} = Σ C(2k,k) x^k
        cc = aut_O_decompose(mu2, 7);
        CHECK(cc.v == QVec{1, 0, b, 0, 0, 0, 0});
        // c1 = v0, c2 = v0 v1, and re-expansion reproduces μ
        QVec gen{Q(2), frac(1, 3), Q(-1), frac(5, 2), Q(4), frac(-1, 9)};
        cc = aut_O_decompose(gen, 6);
        CHECK(cc.v[0] == gen[0]);
        CHECK(gen[1] == cc.v[0] * cc.v[1]);
        CHECK(aut_O_expand(cc.v, 6) == gen);
        CHECK_THROWS_AS(aut_O_decompose({Q(0), Q(1)}, 2), Error);
    }

    TEST_CASE("Aut O action") {
        CartanData cd = build_cartan("A1^1");
        FockContext fc(cd);
        CartanVector xi = -cd.rho_check;
        QVec gen{Q(2), frac(1, 3), Q(-1), frac(5, 2), Q(4), frac(-1, 9)};
        CoordChange mu = aut_O_decompose(gen, 6);
        CState vac = CState::vacuum(cd.zero());
        CHECK(aut_O_act(fc, mu, vac, xi) == vac);
        CartanVector a = cd.coroot[0] + Q(3) * cd.rho_check;
        // R(μ) a_{-1}|0> = (1/μ'(0)) (a_{-1} + (ξ,a) μ''(0)/μ'(0))|0>
        Q mu1 = gen[0], mu2 = 2 * gen[1];
        CState want = (1 / mu1) * (mode_poly<Q>(a, -1) + (cd.bilin(xi, a) * mu2 / mu1) * vac);
        CHECK(aut_O_act(fc, mu, mode_poly<Q>(a, -1), xi) == want);
        CoordChange sc = aut_O_decompose({Q(3)}, 1);
        for (const Mono& m : all_monomials(cd, 3))
            CHECK(aut_O_act(fc, sc, CState::monomial(cd.zero(), m), xi) == CState::monomial(cd.zero(), m, frac(1, 27)));
    }

    TEST_CASE("Aut O action is a representation") {
        CartanData cd = build_cartan("A2^1");
        FockContext fc(cd);
        CartanVector xi = -cd.rho_check;
        const int N = 5;
        QVec g1{Q(2), frac(1, 3), Q(-1), frac(5, 2), Q(4)};
        QVec g2{frac(-1, 2), Q(1), frac(2, 3), Q(0), frac(-3, 4)};
        CoordChange m1 = aut_O_decompose(g1, N), m2 = aut_O_decompose(g2, N);
        // R(μ1) R(μ2) = R(μ2 ∘ μ1)
        CoordChange comp = aut_O_decompose(compose_series(g2, g1, N), N);
        for (int g = 1; g <= 3; ++g)
            for (const Mono& m : all_monomials(cd, g)) {
                CState v = CState::monomial(cd.zero(), m);
                CHECK(aut_O_act(fc, m1, aut_O_act(fc, m2, v, xi), xi) == aut_O_act(fc, comp, v, xi));
            }
    }
}
