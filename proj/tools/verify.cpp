#include "verify.hpp"

#include "affop/canonical.hpp"
#include "affop/global.hpp"
#include "affop/iom.hpp"
#include "affop/oper.hpp"
#include "affop/screening.hpp"

#include <random>
#include <sstream>

namespace affop {

namespace {

using S = Series<Q>;

struct Tally {
    long checks = 0;
    std::string first_failure;
    void check(bool ok, const std::string& what) {
        ++checks;
        if (!ok && first_failure.empty()) first_failure = what;
    }
    bool ok() const { return first_failure.empty(); }
};

CriterionResult finish(int id, const std::string& name, const Tally& t, const std::string& extra = "") {
    std::ostringstream os;
    os << t.checks << " checks";
    if (!extra.empty()) os << "; " << extra;
    if (!t.ok()) os << "; first failure: " << t.first_failure;
    return CriterionResult{id, name, t.ok(), false, os.str()};
}

std::vector<std::string> types(const VerifyOptions& opt, std::vector<std::string> all) {
    if (!opt.type) return all;
    for (const auto& t : all)
        if (t == *opt.type) return {t};
    return all;
}

int cap(const VerifyOptions& opt, int g) { return std::min(g, opt.grade_cap); }

std::vector<CState> monomial_states(const CartanData& cd, int g, const CartanVector& w) {
    std::vector<CState> out;
    for (const Mono& m : all_monomials(cd, g)) out.push_back(CState::monomial(w, m));
    return out;
}

Q random_q(std::mt19937& rng) { return frac(static_cast<long>(rng() % 11) - 5, static_cast<long>(rng() % 4) + 1); }

S random_series(std::mt19937& rng, int order) {
    QVec c(order);
    for (auto& x : c) x = random_q(rng);
    return S(c, order);
}

std::vector<S> random_u(std::mt19937& rng, const CartanData& cd, int order) {
    std::vector<S> u;
    for (size_t k = 0; k < cd.dim(); ++k) u.push_back(random_series(rng, order));
    return u;
}

RatFunc random_ratfunc(std::mt19937& rng, const std::vector<Q>& points) {
    auto rq = [&] { return frac(static_cast<long>(rng() % 7) - 3, static_cast<long>(rng() % 3) + 1); };
    RatFunc f(rq());
    f += RatFunc(rq()) * RatFunc::z();
    for (const Q& p : points)
        for (int k = 1; k <= 2; ++k) f += RatFunc(rq()) * RatFunc::pole(p, k);
    return f;
}

CState random_state(std::mt19937& rng, const CartanData& cd, int g) {
    const auto mons = all_monomials(cd, g);
    CState v(cd.zero());
    for (int k = 0; k < 3; ++k) v.add(mons[rng() % mons.size()], frac(static_cast<long>(rng() % 9) - 4, 1 + rng() % 3));
    return v;
}

const std::vector<QVec> kSampleCoordChanges{{Q(2), frac(1, 3), Q(-1), frac(5, 2), Q(4), frac(-1, 9)},
                                            {frac(-1, 2), Q(1), frac(2, 3), Q(0), frac(-3, 4), Q(2)},
                                            {Q(3), Q(0), frac(1, 5), Q(-2), Q(1), frac(7, 3)}};

CriterionResult virasoro_relations(const VerifyOptions& opt) {
    Tally t;
    const int G = cap(opt, 6);
    for (const auto& ty : types(opt, {"A1^1", "A2^1"})) {
        CartanData cd = build_cartan(ty);
        FockContext fc(cd);
        const Xi xi = xi_quantum_default(cd);
        const EpsScalar xx = EpsScalar(cd.bilin(xi.x0, xi.x0)) + EpsScalar::eps(1, 2 * cd.bilin(xi.x0, xi.x1)) +
                             EpsScalar::eps(2, cd.bilin(xi.x1, xi.x1));
        const EpsScalar c = EpsScalar(Q(static_cast<long>(cd.dim()))) - xx.shifted(-1) * EpsScalar(12);
        for (int g = 0; g <= G; ++g)
            for (const Mono& m : all_monomials(cd, g)) {
                const QState v = QState::monomial(cd.zero(), m);
                std::map<int, QState> L;
                for (int n = -2; n <= 2; ++n) L[n] = virasoro(fc, n, xi, v);
                for (int n = -2; n <= 2; ++n)
                    for (int k = n + 1; k <= 2; ++k) {
                        QState lhs = virasoro(fc, n, xi, L[k]) - virasoro(fc, k, xi, L[n]);
                        QState rhs = L.count(n + k) ? L[n + k] : virasoro(fc, n + k, xi, v);
                        rhs *= EpsScalar(Q(n - k));
                        if (n + k == 0) rhs += EpsScalar(frac(n * n * n - n, 12)) * c * v;
                        t.check(lhs == rhs, ty + " [L_" + std::to_string(n) + ",L_" + std::to_string(k) + "]");
                    }
            }
    }
    return finish(1, "quantum Virasoro relations", t, "modes -2..2, grades <= " + std::to_string(G));
}

CriterionResult conformal_screening(const VerifyOptions& opt) {
    Tally t;
    std::mt19937 rng(2);
    for (const auto& ty : types(opt, {"A1^1", "A2^1"})) {
        CartanData cd = build_cartan(ty);
        FockContext fc(cd);
        const Xi xi = xi_quantum_default(cd);
        const QState w = conformal_vector(fc, xi);
        for (size_t i = 0; i < cd.nodes(); ++i) t.check(screening_quantum(fc, cd.root[i], w).is_zero(), ty + " S_i omega");
        for (int k = 0; k < 5; ++k) {
            CartanVector lam = cd.zero();
            for (size_t d = 0; d < cd.dim(); ++d) lam[d] = random_q(rng);
            // independent closed form: λ_{−1}|λ⟩ (−1 − (λ,ξ) + ½ε(λ,λ))
            const EpsScalar f =
                EpsScalar(-1 - cd.bilin(lam, xi.x0)) + EpsScalar::eps(1, -cd.bilin(lam, xi.x1) + frac(1, 2) * cd.bilin(lam, lam));
            QState want = retag(lift(mode_poly<Q>(lam, -1)), lam);
            want *= f;
            t.check(screening_quantum(fc, lam, w) == want, ty + " closed form");
        }
    }
    return finish(2, "screening of the conformal vector", t, "5 random weights per type");
}

CriterionResult translation_commutes(const VerifyOptions& opt) {
    Tally t;
    const int G = cap(opt, 6);
    for (const auto& ty : types(opt, {"A1^1", "A2^1"})) {
        CartanData cd = build_cartan(ty);
        FockContext fc(cd);
        const CartanVector xi = -cd.rho_check;
        std::vector<CartanVector> weights{cd.zero()};
        for (size_t i = 0; i < cd.nodes(); ++i) weights.push_back(cd.root[i]);
        for (const auto& w : weights)
            for (int g = 0; g <= G; ++g)
                for (const CState& v : monomial_states(cd, g, w)) {
                    const CState tv = t_aff(fc, v);
                    for (int j = 1; j <= 6; ++j)
                        t.check(virasoro_classical(fc, j, xi, tv) == t_aff(fc, virasoro_classical(fc, j, xi, v)), ty + " [L_j,T]");
                }
        t.check(t_aff(fc, mode_poly<Q>(cd.delta, -1)).is_zero(), ty + " T delta");
    }
    return finish(3, "canonical translation commutes with L_j", t, "grades <= " + std::to_string(G) + ", 1 <= j <= 6");
}

CriterionResult serre_relations(const VerifyOptions& opt) {
    Tally t;
    const int G = cap(opt, 5);
    for (const auto& ty : types(opt, {"A1^1", "A2^1"})) {
        CartanData cd = build_cartan(ty);
        FockContext fc(cd);
        for (size_t i = 0; i < cd.nodes(); ++i)
            for (size_t j = 0; j < cd.nodes(); ++j) {
                if (i == j) continue;
                const long k = 1 - cd.A[i][j];
                for (int g = 0; g <= G; ++g)
                    for (const CState& v : monomial_states(cd, g, cd.zero())) {
                        CState total(cd.zero());
                        for (long r = 0; r <= k; ++r) {
                            CState x = v;
                            for (long q = 0; q < r; ++q) x = q_flow(fc, i, x);
                            x = q_flow(fc, j, x);
                            for (long q = 0; q < k - r; ++q) x = q_flow(fc, i, x);
                            x *= Q(r % 2 ? -1 : 1) * binom(k, r);
                            total += x;
                        }
                        t.check(total.is_zero(), ty + " Serre");
                    }
            }
    }
    return finish(4, "Serre relations of screening flows", t, "grades <= " + std::to_string(G));
}

// Coefficients of ∏_{k≥1}(1−q^k)^{−1} ∏_{k≥2}(1−q^k)^{−1}.
std::vector<long> two_generator_series(int N) {
    std::vector<long> p(N + 1, 0);
    p[0] = 1;
    for (int start : {1, 2})
        for (int k = start; k <= N; ++k)
            for (int n = k; n <= N; ++n) p[n] += p[n - k];
    return p;
}

CriterionResult kernel_dimensions(const VerifyOptions& opt) {
    Tally t;
    CartanData cd = build_cartan("A1^1");
    FockContext fc(cd);
    const int N = cap(opt, 4);
    const auto hs = two_generator_series(N);
    std::string dims;
    for (int n = 0; n <= N; ++n) {
        const long d = static_cast<long>(kernel_basis(fc, n).size());
        dims += (n ? "," : "") + std::to_string(d);
        t.check(d == hs[n], "dim at grade " + std::to_string(n));
    }
    return finish(5, "kernel dimensions", t, "A1^1 dims " + dims);
}

CriterionResult decoration(const VerifyOptions& opt) {
    Tally t;
    const int G = cap(opt, 4);
    for (const auto& ty : types(opt, {"A1^1", "A2^1"})) {
        CartanData cd = build_cartan(ty);
        FockContext fc(cd);
        for (int g = 0; g <= G; ++g)
            for (const Mono& m : fin_monomials(cd, g)) {
                const FinElement f = FinElement::monomial(cd.zero(), m);
                const CState d = decorate(fc, f);
                for (size_t i = 0; i < cd.nodes(); ++i) t.check(decorate(fc, fin_q(fc, i, f)) == q_flow(fc, i, d), ty + " intertwining");
            }
    }
    return finish(6, "decoration intertwines screening flows", t, "grades <= " + std::to_string(G));
}

CriterionResult integrals_of_motion(const VerifyOptions& opt) {
    Tally t;
    CartanData cd = build_cartan("A1^1");
    FockContext fc(cd);
    std::string counts;
    for (int j = 1; j <= cap(opt, 5); ++j) {
        const auto cls = iom_density(fc, j);
        counts += (j > 1 ? "," : "") + std::to_string(cls.size());
        t.check(cls.size() == (j % 2 ? 1u : 0u), "class count at j=" + std::to_string(j));
        for (const auto& c : cls) {
            try {
                t.check(verify_class(fc, c).checks.size() == 6, "verify_class");
            } catch (const Error& e) {
                t.check(false, e.what());
            }
        }
        if (j == 1 && cls.size() == 1) {
            // ω̄ = κ v₁ + T^(aff) x with κ ≠ 0
            const CState w = conformal_vector_classical(fc, -cd.rho_check);
            const auto top = all_monomials(cd, 2);
            QMat cols{coords(cls[0].rep, top)};
            for (const Mono& m : all_monomials(cd, 1)) cols.push_back(coords(t_aff(fc, CState::monomial(cd.zero(), m)), top));
            auto x = solve(transpose(cols, static_cast<int>(top.size())), coords(w, top), static_cast<int>(cols.size()));
            t.check(x && (*x)[0] != 0, "conformal vector modulo exact terms");
        }
    }
    return finish(7, "integrals of motion", t, "A1^1 class counts j=1.. " + counts);
}

CriterionResult double_complex(const VerifyOptions& opt) {
    Tally t;
    CartanData cd = build_cartan("A1^1");
    FockContext fc(cd);
    const CartanVector xi = -cd.rho_check;
    for (int g = 0; g <= cap(opt, 6); ++g)
        for (const CState& v : monomial_states(cd, g, cd.zero())) {
            const CState tv = t_aff(fc, v);
            t.check(tv.coeff(Mono()) == 0, "vacuum component of T");
            const auto h1 = hamiltonian(fc, tv), h2 = hamiltonian(fc, v);
            for (size_t i = 0; i < h1.size(); ++i) t.check(h1[i] == t_aff(fc, h2[i]), "H T = T H");
        }
    std::vector<IomClass> classes;
    for (int j : {1, 3, 5})
        if (j <= cap(opt, 5))
            for (auto& c : iom_density(fc, j)) classes.push_back(std::move(c));
    for (const QVec& gv : kSampleCoordChanges) {
        const CoordChange mu = aut_O_decompose(gv, 6);
        for (int g = 0; g <= cap(opt, 4); ++g)
            for (const CState& v : monomial_states(cd, g, cd.zero())) {
                const auto lhs = hamiltonian(fc, aut_O_act(fc, mu, v, xi));
                const auto hv = hamiltonian(fc, v);
                for (size_t i = 0; i < lhs.size(); ++i) t.check(lhs[i] == aut_O_act(fc, mu, hv[i], xi), "H equivariance");
            }
        for (const IomClass& c : classes) {
            const auto top = all_monomials(cd, c.j + 1);
            const CState d = aut_O_act(fc, mu, c.rep, xi) - qpow(1 / gv[0], c.j + 1) * c.rep;
            bool ok = d.homogeneous(c.j + 1);
            for (const Q& q : reduce(exact_image(fc, c.j), coords(d, top))) ok = ok && q == 0;
            t.check(ok, "class covariance j=" + std::to_string(c.j));
        }
    }
    return finish(8, "double complex and coordinate covariance", t, "3 coordinate changes of order 6");
}

std::vector<RatFunc> miura_of_chi(const CartanData& cd, const ChiSection& c) {
    std::vector<RatFunc> u(cd.dim());
    for (size_t i = 0; i < c.points.size(); ++i)
        for (size_t k = 0; k < c.coeffs[i].size(); ++k)
            for (size_t d = 0; d < cd.dim(); ++d)
                u[d] -= RatFunc(c.coeffs[i][k][d]) * RatFunc::pole(c.points[i], static_cast<int>(k) + 1);
    return u;
}

CriterionResult quasi_canonical_form(const VerifyOptions&) {
    Tally t;
    std::mt19937 rng(9);
    CartanData cd = build_cartan("A1^1");
    for (int cfg = 0; cfg < 5; ++cfg) {
        const ChiSection c = random_chi(cd, {Q(0), Q(1)}, 1, rng);
        const auto A = miura_connection(cd, miura_of_chi(cd, c));
        const auto qa = quasi_canonical(cd, A, 3);
        LoopElement<RatFunc> Y(2);
        for (int g = 1; g <= 3; ++g)
            for (const auto& b : grade_basis(2, g)) {
                const RatFunc f = RatFunc(frac(static_cast<long>(rng() % 5) - 2, 1)) +
                                  RatFunc(frac(static_cast<long>(rng() % 5) - 2, 2)) * RatFunc::z() +
                                  RatFunc(frac(1 + static_cast<long>(rng() % 3), 1)) * RatFunc::pole(c.points[cfg % 2], 1);
                for (const auto& [key, q] : b.terms) Y.add(key, RatFunc(q) * f);
            }
        const auto qb = quasi_canonical(cd, gauge_exp(A, Y, 3), 3);
        t.check(qa.phi == qb.phi, "phi gauge invariance");
        t.check(qa.v.at(1)[0] == qb.v.at(1)[0], "v1 gauge invariance");
        t.check(cohomology_equal(qb.v.at(3)[0], qa.v.at(3)[0], qa.phi, 3, cd.h, c.points).equal, "v3 class invariance");
    }
    const int T = 9, ok = T - 4;
    for (int trial = 0; trial < 3; ++trial) {
        const auto u = random_u(rng, cd, T);
        QVec mc(T);
        for (int k = 1; k < T; ++k) mc[k] = frac(trial + k, k + 2);
        const S mu(mc, T);
        const auto A = miura_connection(cd, u);
        const auto q0 = quasi_canonical(cd, A, 3);
        const auto q1 = quasi_canonical(cd, coordinate_change(A, mu), 3);
        t.check(q1.phi.truncated(ok) == transform_phi(q0.phi, mu, cd.h).truncated(ok), "phi transform law");
        t.check(q1.v.at(1)[0].truncated(ok) == transform_v(q0.v.at(1)[0], 1, mu).truncated(ok), "v1 transform law");
    }
    return finish(9, "quasi-canonical form", t, "5 rational gauges with 2 marked points, 3 coordinate changes");
}

CriterionResult ricatti(const VerifyOptions&) {
    Tally t;
    std::mt19937 rng(10);
    CartanData cd = build_cartan("A1^1");
    const int T = 13;
    for (int trial = 0; trial < 5; ++trial) {
        const auto u = random_u(rng, cd, T);
        const size_t i = static_cast<size_t>(trial) % cd.nodes();
        const Q c = frac(trial + 1, 3);
        const S a = ricatti_solve(cd, u, i, c);
        t.check((a * a - a.deriv() - a * pair_h(cd, u, cd.root[i])).truncated(11).is_zero(), "Ricatti equation to t^10");
        LoopElement<S> Y(2);
        Y.add(e_key(2, static_cast<int>(i)), -a);
        t.check(gauge_exp(miura_connection(cd, u), Y, 10).truncated(11) == miura_connection(cd, reproduction(cd, u, i, c)).truncated(11),
                "reproduction as gauge to t^10");
    }
    return finish(10, "Ricatti reproduction", t, "gauge by exp(-a e_i), u -> u - a alpha_i");
}

CriterionResult oper_kernel(const VerifyOptions& opt) {
    Tally t;
    for (const auto& ty : types(opt, {"A1^1", "A2^1"})) {
        CartanData cd = build_cartan(ty);
        FockContext fc(cd);
        const auto qc = quasi_canonical(cd, miura_connection(cd, symbolic_miura(cd, 6, -1)), 1);
        for (int p = 0; p <= 4; ++p) {
            for (const CState& h : hamiltonian(fc, qc.phi.coeff(p).to_state(cd.zero()))) t.check(h.is_zero(), ty + " phi");
            for (const CState& h : hamiltonian(fc, qc.v.at(1)[0].coeff(p).to_state(cd.zero()))) t.check(h.is_zero(), ty + " v1");
        }
    }
    return finish(11, "oper coefficients lie in the screening kernel", t, "series orders <= 4, identification u <-> -b");
}

CriterionResult functoriality(const VerifyOptions& opt) {
    Tally t;
    std::mt19937 rng(12);
    for (const auto& ty : types(opt, {"A1^1", "A2^1"})) {
        CartanData cd = build_cartan(ty);
        FockContext fc(cd);
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<Q> pts{Q(0), Q(1)};
            if (trial == 2) pts.push_back(frac(-2, 3));
            const ChiSection c = random_chi(cd, pts, 2, rng);
            for (int k = 0; k < 20; ++k) {
                GlobalSection s;
                s.j = k % 4;
                for (int g = 0; g <= cap(opt, 4); ++g) s.add(random_state(rng, cd, g), random_ratfunc(rng, pts));
                t.check(f_chi(cd, nabla_aff(fc, s), c) == nabla_aff_chi(cd, f_chi(cd, s, c), s.j, c), ty + " functoriality");
            }
            // twist rule: F(δ_{−n} v) = φ^{(n−1)}/(n−1)! · F(v)
            RatFunc phin = chi_phi(cd, c);
            Q fact = 1;
            for (int n = 1; n <= 4; ++n) {
                if (n > 1) {
                    phin = phin.deriv();
                    fact *= Q(n - 1);
                }
                const CState v = random_state(rng, cd, 2);
                t.check(f_chi(cd, multiply(mode_poly<Q>(cd.delta, -n), v), c) == RatFunc(Q(1) / fact) * phin * f_chi(cd, v, c),
                        ty + " twist rule");
            }
        }
    }
    return finish(12, "evaluation map intertwines connections", t, "20 sections for each of 3 chi per type");
}

CriterionResult coinvariants(const VerifyOptions& opt) {
    Tally t;
    std::mt19937 rng(13);
    for (const auto& ty : types(opt, {"A1^1", "A2^1"})) {
        CartanData cd = build_cartan(ty);
        const ChiSection c = random_chi(cd, {Q(0), Q(1), frac(5, 2)}, 2, rng);
        const LocalChi loc = local_data(cd, c, 6);
        std::vector<RatFunc> probes;
        for (const Q& p : c.points)
            for (int k = 1; k <= 4; ++k) probes.push_back(RatFunc::pole(p, k));
        for (size_t a = 0; a < cd.dim(); ++a)
            for (const auto& f : probes) t.check(coinvariant_pair(cd, cd.basis(a), f, c, loc) == 0, ty + " glued section");
        for (int trial = 0; trial < 5; ++trial) {
            LocalChi bad = loc;
            const size_t i = rng() % c.points.size();
            const int e = static_cast<int>(rng() % 5) - 3;
            CartanVector d = cd.zero();
            d[rng() % cd.dim()] = frac(1 + static_cast<long>(rng() % 4), 2);
            auto it = bad.at[i].emplace(e, cd.zero()).first;
            it->second = it->second + d;
            bool nonzero = false;
            for (size_t a = 0; a < cd.dim(); ++a)
                for (const auto& f : probes) nonzero = nonzero || coinvariant_pair(cd, cd.basis(a), f, c, bad) != 0;
            t.check(nonzero, ty + " perturbation detected");
        }
    }
    return finish(13, "coinvariants", t, "5 perturbations per type");
}

CriterionResult correspondence(const VerifyOptions&) {
    Tally coh, exact;
    std::mt19937 rng(1);
    CartanData cd = build_cartan("A1^1");
    FockContext fc(cd);
    const Q k1 = frac(-1, 16), k3 = frac(-3, 1024);
    for (int cfg = 0; cfg < 2; ++cfg) {
        const ChiSection c = random_chi(cd, {Q(0), Q(1), frac(-1, 2)}, 1, rng);
        const auto r1 = fc_compare(fc, 1, c, k1);
        coh.check(r1.equal, "j=1 in cohomology");
        exact.check(r1.from_oper == RatFunc(k1) * r1.from_density, "j=1 exact equality");
        const auto r3 = fc_compare(fc, 3, c, k3);
        coh.check(r3.equal && !r3.coh.witness.is_zero(), "j=3 in cohomology with witness");
        coh.check(!fc_compare(fc, 3, c, Q(2) * k3).equal, "wrong normalization rejected");
    }
    CriterionResult r = finish(14, "densities match oper coefficients", coh, "kappa1=-1/16, kappa3=-3/1024, 2 configurations");
    if (!exact.ok()) {
        r.pass = false;
        r.known_failure = coh.ok();
        r.detail += "; j=1 holds only up to an exact term, not exactly: the oper gives F(omega)/h and omega lies outside the aff "
                    "subspace, where the j=1 density is unique (see README)";
    }
    return r;
}

}  // namespace

std::string format_result(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << (r.id < 10 ? "  " : " ") << r.id << "  " << r.name << "  (" << r.detail << ")";
    if (r.known_failure) os << " [known]";
    return os.str();
}

std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt, const std::function<void(const CriterionResult&)>& on_result) {
    using Fn = CriterionResult (*)(const VerifyOptions&);
    const std::vector<std::pair<std::string, Fn>> all{
        {"quantum Virasoro relations", virasoro_relations},
        {"screening of the conformal vector", conformal_screening},
        {"canonical translation commutes with L_j", translation_commutes},
        {"Serre relations of screening flows", serre_relations},
        {"kernel dimensions", kernel_dimensions},
        {"decoration intertwines screening flows", decoration},
        {"integrals of motion", integrals_of_motion},
        {"double complex and coordinate covariance", double_complex},
        {"quasi-canonical form", quasi_canonical_form},
        {"Ricatti reproduction", ricatti},
        {"oper coefficients lie in the screening kernel", oper_kernel},
        {"evaluation map intertwines connections", functoriality},
        {"coinvariants", coinvariants},
        {"densities match oper coefficients", correspondence}};
    std::vector<CriterionResult> out;
    for (size_t k = 0; k < all.size(); ++k) {
        CriterionResult r;
        try {
            r = all[k].second(opt);
        } catch (const Error& e) {
            r = CriterionResult{static_cast<int>(k) + 1, all[k].first, false, false, std::string("error: ") + e.what()};
        }
        if (on_result) on_result(r);
        out.push_back(r);
    }
    return out;
}

}  // namespace affop
