#pragma once

#include "affop/cartan.hpp"
#include "affop/linalg.hpp"
#include "affop/poly.hpp"
#include "affop/series.hpp"

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace affop {

// Basis element of the loop realization of sl_n^(1): E_ab ⊗ s^m (1 ≤ a,b ≤ n), the central
// element K (a = 0), or the principal grading element ρ̌ (a = −1).
struct LoopKey {
    int a = 0, b = 0, m = 0;
    static LoopKey central() { return {0, 0, 0}; }
    static LoopKey rho() { return {-1, 0, 0}; }
    bool is_central() const { return a == 0; }
    bool is_rho() const { return a == -1; }
    friend bool operator<(const LoopKey& x, const LoopKey& y) { return std::tie(x.a, x.b, x.m) < std::tie(y.a, y.b, y.m); }
    friend bool operator==(const LoopKey& x, const LoopKey& y) { return std::tie(x.a, x.b, x.m) == std::tie(y.a, y.b, y.m); }
};

// Principal grade of E_ab s^m in sl_n^(1): (b − a) + m n; K and ρ̌ have grade 0.
inline int principal_grade(int n, const LoopKey& k) { return k.a <= 0 ? 0 : (k.b - k.a) + k.m * n; }

template <class R>
struct LoopElement {
    int n = 2;
    std::map<LoopKey, R> terms;

    LoopElement() = default;
    explicit LoopElement(int n_) : n(n_) {}
    void add(const LoopKey& k, const R& c) {
        if (affop::is_zero(c)) return;
        auto [it, ins] = terms.emplace(k, c);
        if (!ins) {
            it->second += c;
            if (affop::is_zero(it->second)) terms.erase(it);
        }
    }
    R coeff(const LoopKey& k) const {
        auto it = terms.find(k);
        return it == terms.end() ? R(Q(0)) : it->second;
    }
    bool is_zero() const { return terms.empty(); }
    // Part of principal grade exactly g.
    LoopElement grade_part(int g) const {
        LoopElement r(n);
        for (const auto& [k, c] : terms)
            if (principal_grade(n, k) == g) r.terms.emplace(k, c);
        return r;
    }
    LoopElement truncated(int N) const {
        LoopElement r(n);
        for (const auto& [k, c] : terms)
            if (principal_grade(n, k) <= N) r.terms.emplace(k, c);
        return r;
    }
    int min_grade() const {
        int g = INT_MAX;
        for (const auto& [k, c] : terms) g = std::min(g, principal_grade(n, k));
        return g;
    }
    LoopElement& operator+=(const LoopElement& o) {
        for (const auto& [k, c] : o.terms) add(k, c);
        return *this;
    }
    LoopElement& operator-=(const LoopElement& o) {
        for (const auto& [k, c] : o.terms) add(k, -c);
        return *this;
    }
    friend LoopElement operator+(LoopElement a, const LoopElement& b) { return a += b; }
    friend LoopElement operator-(LoopElement a, const LoopElement& b) { return a -= b; }
    friend bool operator==(const LoopElement& a, const LoopElement& b) { return a.terms == b.terms; }
    friend bool operator!=(const LoopElement& a, const LoopElement& b) { return !(a == b); }
};

// Coefficient ring changes: scalar (rational) element to ring element.
template <class R>
LoopElement<R> lift_loop(const LoopElement<Q>& x) {
    LoopElement<R> r(x.n);
    for (const auto& [k, c] : x.terms) r.add(k, R(c));
    return r;
}

template <class R>
LoopElement<R> scale(const LoopElement<R>& x, const R& f) {
    LoopElement<R> r(x.n);
    if (is_zero(f)) return r;
    for (const auto& [k, c] : x.terms) r.add(k, c * f);
    return r;
}

template <class R>
LoopElement<R> scale_q(LoopElement<R> x, const Q& q) {
    LoopElement<R> r(x.n);
    for (auto& [k, c] : x.terms) r.add(k, c * R(q));
    return r;
}

template <class R>
LoopElement<R> deriv_loop(const LoopElement<R>& x) {
    LoopElement<R> r(x.n);
    for (const auto& [k, c] : x.terms) r.add(k, deriv(c));
    return r;
}

// Affine bracket; terms of grade > N are dropped.
template <class R>
LoopElement<R> bracket(const LoopElement<R>& x, const LoopElement<R>& y, int N) {
    const int n = x.n;
    LoopElement<R> r(n);
    for (const auto& [kx, cx] : x.terms) {
        const int gx = principal_grade(n, kx);
        for (const auto& [ky, cy] : y.terms) {
            const int gy = principal_grade(n, ky);
            if (gx + gy > N) continue;
            if (kx.is_central() || ky.is_central()) continue;
            if (kx.is_rho() && ky.is_rho()) continue;
            if (kx.is_rho()) {
                if (gy) r.add(ky, R(Q(gy)) * cx * cy);
                continue;
            }
            if (ky.is_rho()) {
                if (gx) r.add(kx, R(Q(-gx)) * cx * cy);
                continue;
            }
            const R cc = cx * cy;
            const int m = kx.m + ky.m;
            if (kx.b == ky.a) r.add({kx.a, ky.b, m}, cc);
            if (ky.b == kx.a) r.add({ky.a, kx.b, m}, -cc);
            if (m == 0 && kx.m != 0 && kx.b == ky.a && kx.a == ky.b) r.add(LoopKey::central(), R(Q(kx.m)) * cc);
        }
    }
    return r;
}

// Realization data for A_ℓ^(1), ℓ ≤ 3.
struct LoopType {
    int n = 2;  // sl_n
    int ell = 1;
};
LoopType loop_type(const CartanData& cd);  // throws UnsupportedRealization

LoopKey e_key(int n, int i);
LoopKey f_key(int n, int i);
LoopElement<Q> p_minus_one(int n);
// Basis of the principal grade-k subspace (traceless on loop Cartan parts; grade 0 includes K and ρ̌).
std::vector<LoopElement<Q>> grade_basis(int n, int k);
// Basis of ker(ad p₁) in grade k, normalized: p₁ by [p₁, p_{−1}] = δ, otherwise lex-least coefficient 1.
std::vector<LoopElement<Q>> p_generators(int n, int k);
// dim coker(ad p_{−1} : g_{k+1} → g_k) for k = 1..N, as a sorted multiset.
std::vector<int> exponents_from_loop(int n, int N);
// h ↔ grade-0 loop elements.
LoopElement<Q> h_to_loop(const CartanData& cd, const CartanVector& x);
CartanVector loop_to_h(const CartanData& cd, const LoopElement<Q>& x);
// Root multidegree over the nodes 0..ℓ of a root vector key.
std::vector<int> root_multidegree(int n, const LoopKey& k);
std::string loop_str(const LoopElement<Q>& x);

template <class R>
LoopElement<R> h_to_loop_r(const CartanData& cd, const std::vector<R>& x) {
    LoopElement<R> r(static_cast<int>(cd.nodes()));
    for (size_t k = 0; k < x.size(); ++k) {
        if (is_zero(x[k])) continue;
        for (const auto& [key, q] : h_to_loop(cd, cd.basis(k)).terms) r.add(key, x[k] * R(q));
    }
    return r;
}

// Coordinates (on the h basis) of the grade-0 part: α̌_0 = K − (E_11 − E_nn), α̌_i = E_ii − E_{i+1,i+1}.
template <class R>
std::vector<R> loop_to_h_r(const CartanData& cd, const LoopElement<R>& x) {
    const int n = x.n;
    std::vector<R> out(cd.dim(), R(Q(0)));
    out[0] = x.coeff(LoopKey::central());
    R acc = out[0];
    for (int a = 1; a < n; ++a) {
        acc += x.coeff({a, a, 0});
        out[a] = acc;
    }
    out[n] = x.coeff(LoopKey::rho());
    return out;
}

// Solves M z = rhs for R-valued rhs (M rational); free unknowns are set to zero.
template <class R>
std::optional<std::vector<R>> solve_module(const QMat& M, const std::vector<R>& rhs, int ncols) {
    const int nrows = static_cast<int>(M.size());
    QMat aug(nrows, QVec(ncols + nrows));
    for (int r = 0; r < nrows; ++r) {
        for (int c = 0; c < ncols; ++c) aug[r][c] = M[r][c];
        aug[r][ncols + r] = 1;
    }
    Echelon e = rref(aug, ncols + nrows);
    std::vector<R> z(ncols, R(Q(0)));
    for (int r = 0; r < e.rank(); ++r) {
        R val(Q(0));
        for (int q = 0; q < nrows; ++q)
            if (e.rows[r][ncols + q] != 0) val += rhs[q] * R(e.rows[r][ncols + q]);
        if (e.pivots[r] < ncols) {
            z[e.pivots[r]] = val;
        } else if (!is_zero(val)) {
            return std::nullopt;
        }
    }
    return z;
}

// d + A dt ↦ d + (e^{ad Y} A − Σ_k (ad Y)^k Y' / (k+1)!) dt, truncated at grade N.
template <class R>
LoopElement<R> gauge_exp(const LoopElement<R>& A, const LoopElement<R>& Y, int N) {
    if (Y.is_zero()) return A.truncated(N);
    LoopElement<R> out = A.truncated(N);
    LoopElement<R> term = A;
    for (int k = 1;; ++k) {
        term = scale_q(bracket(Y, term, N), frac(1, k));
        if (term.is_zero()) break;
        out += term;
    }
    LoopElement<R> d = deriv_loop(Y).truncated(N);
    for (int k = 1; !d.is_zero(); ++k) {
        out -= d;
        d = scale_q(bracket(Y, d, N), frac(1, k + 1));
    }
    return out;
}

// d + A dt ↦ gauge by ψ^λ (λ ∈ h with integral pairings on roots): Ad scales root vectors by ψ^{⟨λ,α⟩}, plus −(ψ'/ψ) λ.
template <class R>
LoopElement<R> gauge_cartan(const CartanData& cd, const LoopElement<R>& A, const R& psi, const CartanVector& lambda) {
    const int n = A.n;
    std::vector<Q> pair(cd.nodes());
    for (size_t j = 0; j < cd.nodes(); ++j) pair[j] = cd.bilin(lambda, cd.root[j]);
    LoopElement<R> out(n);
    std::map<long, R> powers;
    auto power = [&](long e) -> R {
        auto it = powers.find(e);
        if (it != powers.end()) return it->second;
        R p = pow(psi, e);
        powers.emplace(e, p);
        return p;
    };
    for (const auto& [k, c] : A.terms) {
        Q e = 0;
        if (!k.is_central() && !k.is_rho()) {
            auto d = root_multidegree(n, k);
            for (size_t j = 0; j < d.size(); ++j) e += Q(d[j]) * pair[j];
        }
        if (e.get_den() != 1) throw Error("NonIntegralWeight", "gauge exponent is not an integer");
        const long ei = e.get_num().get_si();
        out.add(k, ei == 0 ? c : c * power(ei));
    }
    R logd = deriv(psi) * pow(psi, -1);
    out -= scale(lift_loop<R>(h_to_loop(cd, lambda)), logd);
    return out;
}

// One step of a gauge witness.
template <class R>
struct GaugeStep {
    bool cartan = false;
    LoopElement<R> Y;      // exp(Y) step
    R psi;                 // ψ^λ step
    CartanVector lambda;
};

template <class R>
LoopElement<R> apply_witness(const CartanData& cd, LoopElement<R> A, const std::vector<GaugeStep<R>>& w, int N) {
    for (const auto& s : w) A = s.cartan ? gauge_cartan(cd, A, s.psi, s.lambda).truncated(N) : gauge_exp(A, s.Y, N);
    return A;
}

template <class R>
struct QuasiCanonical {
    R phi;                   // ρ̌-component of the result is −φ/h
    std::map<int, std::vector<R>> v;  // grade j ∈ E ↦ coefficients along p_generators(n, j)
    std::vector<GaugeStep<R>> witness;
    LoopElement<R> form;     // p_{−1} − (φ/h)ρ̌ + Σ v_j p_j
};

inline bool is_unit(const RatFunc& f) { return !f.is_zero(); }
inline RatFunc pow(const RatFunc& f, long e) {
    if (e < 0) return pow(f.inverse(), -e);
    RatFunc r(Q(1)), b = f;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

// Grade-by-grade Drinfeld–Sokolov elimination up to grade N.
template <class R>
QuasiCanonical<R> quasi_canonical(const CartanData& cd, const LoopElement<R>& A0, int N) {
    const LoopType lt = loop_type(cd);
    const int n = lt.n;
    QuasiCanonical<R> res;
    LoopElement<R> A = A0.truncated(N);
    if (A.min_grade() < -1) throw Error("DomainError", "connection has components below grade -1");
    // ψ_i from the grade −1 part
    for (const auto& [k, c] : A.grade_part(-1).terms) {
        bool ok = false;
        for (int i = 0; i < n; ++i) ok = ok || k == f_key(n, i);
        if (!ok) throw Error("DomainError", "unexpected grade -1 component");
    }
    std::vector<R> psi;
    for (int i = 0; i < n; ++i) {
        R c = A.coeff(f_key(n, i));
        if (!is_unit(c)) throw Error("NotInvertibleUnit", "coefficient of f_" + std::to_string(i) + " is not a unit");
        psi.push_back(c);
    }
    for (int i = 0; i < n; ++i) {
        if (psi[i] == R(Q(1))) continue;
        GaugeStep<R> s;
        s.cartan = true;
        s.psi = psi[i];
        s.lambda = cd.fund_coweight[i];
        A = gauge_cartan(cd, A, s.psi, s.lambda).truncated(N);
        res.witness.push_back(s);
    }
    const LoopElement<Q> pm1 = p_minus_one(n);
    for (int k = 0; k <= N; ++k) {
        const auto up = grade_basis(n, k + 1);
        std::vector<LoopElement<Q>> comp;
        if (k == 0) {
            LoopElement<Q> r(n);
            r.add(LoopKey::rho(), Q(1));
            comp.push_back(r);
        } else {
            comp = p_generators(n, k);
        }
        // columns: [Y_b, p_{−1}] for basis Y_b, then complement vectors
        std::vector<LoopElement<Q>> cols;
        for (const auto& y : up) cols.push_back(bracket(y, pm1, N + 1));
        for (const auto& c : comp) cols.push_back(c);
        const LoopElement<R> bk = A.grade_part(k);
        std::map<LoopKey, int> rowidx;
        for (const auto& c : cols)
            for (const auto& [key, q] : c.terms) rowidx.emplace(key, 0);
        for (const auto& [key, c] : bk.terms) rowidx.emplace(key, 0);
        int r = 0;
        for (auto& [key, idx] : rowidx) idx = r++;
        QMat M(r, QVec(cols.size()));
        for (size_t j = 0; j < cols.size(); ++j)
            for (const auto& [key, q] : cols[j].terms) M[rowidx[key]][j] = q;
        std::vector<R> rhs(r, R(Q(0)));
        for (const auto& [key, c] : bk.terms) rhs[rowidx[key]] = -c;
        auto z = solve_module<R>(M, rhs, static_cast<int>(cols.size()));
        if (!z) throw Error("FailedInvariant", "grade " + std::to_string(k) + " is not spanned by the image and the complement");
        LoopElement<R> Y(n);
        for (size_t j = 0; j < up.size(); ++j)
            if (!is_zero((*z)[j]))
                for (const auto& [key, q] : up[j].terms) Y.add(key, (*z)[j] * R(q));
        if (!Y.is_zero()) {
            A = gauge_exp(A, Y, N);
            GaugeStep<R> s;
            s.Y = Y;
            res.witness.push_back(s);
        }
        if (k >= 1 && !comp.empty()) {
            std::vector<R> coeffs;
            for (size_t c = 0; c < comp.size(); ++c) coeffs.push_back(-(*z)[up.size() + c]);
            res.v[k] = coeffs;
        }
    }
    res.phi = A.coeff(LoopKey::rho()) * R(Q(-n));
    res.form = A;
    return res;
}

// d + (p_{−1} + u) dt with u ∈ h(R) given on the h basis.
template <class R>
LoopElement<R> miura_connection(const CartanData& cd, const std::vector<R>& u) {
    const int n = loop_type(cd).n;
    LoopElement<R> A = lift_loop<R>(p_minus_one(n));
    A += h_to_loop_r(cd, u);
    return A;
}

// ⟨u, x⟩ for u ∈ h(R) on the h basis.
template <class R>
R pair_h(const CartanData& cd, const std::vector<R>& u, const CartanVector& x) {
    R s(Q(0));
    for (size_t k = 0; k < u.size(); ++k) {
        Q w = 0;
        for (size_t j = 0; j < x.size(); ++j) w += cd.gram[k][j] * x[j];
        if (w != 0 && !is_zero(u[k])) s += u[k] * R(w);
    }
    return s;
}

// Ricatti data: g = exp ∫(−⟨u, α_i⟩).
template <class C>
Series<C> ricatti_infinitesimal(const CartanData& cd, const std::vector<Series<C>>& u, size_t i) {
    return exp_series(Series<C>(-pair_h(cd, u, cd.root[i])).integral());
}

// a = −c g / (1 + c ∫g), the solution of a² − a' − a⟨α_i,u⟩ = 0 with a = −c + O(t).
Series<Q> ricatti_solve(const CartanData& cd, const std::vector<Series<Q>>& u, size_t i, const Q& c);
// u ↦ u − a α_i, the gauge by exp(−a e_i).
std::vector<Series<Q>> reproduction(const CartanData& cd, const std::vector<Series<Q>>& u, size_t i, const Q& c);

// t = μ(s): A(t) dt ↦ A(μ(s)) μ'(s) ds.
LoopElement<Series<Q>> coordinate_change(const LoopElement<Series<Q>>& A, const Series<Q>& mu);
// Expected transforms of the quasi-canonical data.
Series<Q> transform_phi(const Series<Q>& phi, const Series<Q>& mu, long h);
Series<Q> transform_v(const Series<Q>& v, int j, const Series<Q>& mu);

// Symbolic Miura datum on the disc: u = σ Σ_{n<0} u_n t^{−n−1} with u_{k,n} ↦ b_{k,n}, up to t^{order−1}.
std::vector<Series<FunPoly>> symbolic_miura(const CartanData& cd, int order, int sign);

}  // namespace affop
