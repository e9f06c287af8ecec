#pragma once

#include "affop/cartan.hpp"
#include "affop/eps.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace affop {

// Canonically sorted multiset of creation modes b_{i,n}, n<0; one code unit per mode.
// Code = (i << 8) | (−n), so code order is lexicographic on (basis index, −mode).
using Mono = std::u16string;

inline char16_t mode_code(int i, int n) { return static_cast<char16_t>((i << 8) | (-n)); }
inline int code_index(char16_t c) { return c >> 8; }
inline int code_mode(char16_t c) { return -static_cast<int>(c & 0xff); }

inline int grade(const Mono& m) {
    int g = 0;
    for (char16_t c : m) g += c & 0xff;
    return g;
}
Mono mono_mul(const Mono& a, const Mono& b);
Mono mono_insert(const Mono& m, char16_t c);
// Removes one copy of c; returns the multiplicity of c before removal (0 if absent).
int mono_remove(Mono& m, char16_t c);

template <class C>
struct FockElement {
    CartanVector weight;
    std::map<Mono, C> terms;

    FockElement() = default;
    explicit FockElement(CartanVector w) : weight(std::move(w)) {}
    static FockElement vacuum(CartanVector w) {
        FockElement r(std::move(w));
        r.terms.emplace(Mono(), C(1));
        return r;
    }
    static FockElement monomial(CartanVector w, Mono m, C c = C(1)) {
        FockElement r(std::move(w));
        r.add(m, c);
        return r;
    }

    void add(const Mono& m, const C& c) {
        if (affop::is_zero(c)) return;
        auto it = terms.find(m);
        if (it == terms.end()) {
            terms.emplace(m, c);
            return;
        }
        it->second += c;
        if (affop::is_zero(it->second)) terms.erase(it);
    }
    bool is_zero() const { return terms.empty(); }
    C coeff(const Mono& m) const {
        auto it = terms.find(m);
        return it == terms.end() ? C() : it->second;
    }
    int max_grade() const {
        int g = 0;
        for (const auto& [m, c] : terms) g = std::max(g, grade(m));
        return g;
    }
    bool homogeneous(int g) const {
        for (const auto& [m, c] : terms)
            if (grade(m) != g) return false;
        return true;
    }

    FockElement& operator+=(const FockElement& o) {
        if (weight.size() == 0) weight = o.weight;
        for (const auto& [m, c] : o.terms) add(m, c);
        return *this;
    }
    FockElement& operator-=(const FockElement& o) {
        if (weight.size() == 0) weight = o.weight;
        for (const auto& [m, c] : o.terms) add(m, -c);
        return *this;
    }
    FockElement& operator*=(const C& s) {
        if (affop::is_zero(s)) { terms.clear(); return *this; }
        for (auto& [m, c] : terms) c *= s;
        return *this;
    }
    friend FockElement operator+(FockElement a, const FockElement& b) { return a += b; }
    friend FockElement operator-(FockElement a, const FockElement& b) { return a -= b; }
    friend FockElement operator*(const C& s, FockElement a) { return a *= s; }
    friend FockElement operator-(FockElement a) { return a *= C(-1); }
    friend bool operator==(const FockElement& a, const FockElement& b) {
        return a.terms == b.terms && (a.terms.empty() || a.weight == b.weight);
    }
    friend bool operator!=(const FockElement& a, const FockElement& b) { return !(a == b); }
};

using QState = FockElement<EpsScalar>;  // quantum module π_λ^ε
using CState = FockElement<Q>;          // classical module π_λ

template <class C>
FockElement<C> retag(FockElement<C> v, const CartanVector& w) {
    v.weight = w;
    return v;
}

// Commutative product of polynomial states; weights add.
template <class C>
FockElement<C> multiply(const FockElement<C>& a, const FockElement<C>& b) {
    FockElement<C> r(a.weight + b.weight);
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) r.add(mono_mul(ma, mb), ca * cb);
    return r;
}

// a_n as a polynomial state in the creation modes (n<0), weight zero.
template <class C>
FockElement<C> mode_poly(const CartanVector& a, int n) {
    FockElement<C> r(CartanVector(a.size()));
    for (size_t j = 0; j < a.size(); ++j)
        if (a[j] != 0) r.add(Mono(1, mode_code(static_cast<int>(j), n)), C(a[j]));
    return r;
}

// ∂/∂b_{j,n} applied termwise (n<0).
template <class C>
FockElement<C> partial(const FockElement<C>& v, int j, int n) {
    FockElement<C> r(v.weight);
    const char16_t code = mode_code(j, n);
    for (const auto& [m, c] : v.terms) {
        Mono mm = m;
        int k = mono_remove(mm, code);
        if (k) r.add(mm, C(k) * c);
    }
    return r;
}

CState classical_part(const QState& v, int power = 0);  // coefficient of ε^power
// Coefficient of ε^power after checking that no lower power survives.
CState classical_limit(const QState& v, int power);
QState lift(const CState& v);

// Dual basis b^i (rows of gram⁻¹), cached per Cartan data.
struct FockContext {
    const CartanData* cd = nullptr;
    QMat ginv;
    explicit FockContext(const CartanData& c);
    Q pair_basis(const CartanVector& a, size_t j) const;  // (a, b_j)
};

// ξ = ξ0 + ε ξ1.
struct Xi {
    CartanVector x0, x1;
};
Xi xi_rho_check(const CartanData& cd);             // ξ = −ρ̌
Xi xi_quantum_default(const CartanData& cd);       // ξ = −ρ̌ + ερ

QState apply_mode(const FockContext& fc, const CartanVector& a, int n, const QState& v);
QState virasoro(const FockContext& fc, int n, const Xi& xi, const QState& v);
CState virasoro_classical(const FockContext& fc, int n, const CartanVector& xi, const CState& v);

template <class C>
FockElement<C> translate(const FockElement<C>& v) {
    FockElement<C> r(v.weight);
    for (const auto& [m, c] : v.terms) {
        for (size_t k = 0; k < m.size(); ++k) {
            if (k > 0 && m[k] == m[k - 1]) continue;
            int mult = 0;
            for (size_t q = k; q < m.size() && m[q] == m[k]; ++q) ++mult;
            Mono mm = m;
            mono_remove(mm, m[k]);
            const int n = code_mode(m[k]);
            r.add(mono_insert(mm, mode_code(code_index(m[k]), n - 1)), C(mult * -n) * c);
        }
        bool vac = false;
        for (const auto& x : v.weight.c) vac = vac || x != 0;
        if (vac)
            for (size_t j = 0; j < v.weight.size(); ++j)
                if (v.weight[j] != 0) r.add(mono_insert(m, mode_code(static_cast<int>(j), -1)), C(v.weight[j]) * c);
    }
    return r;
}

// State-field products on π₀^ε: A_(n) B.
QState nth_product(const FockContext& fc, const QState& A, int n, const QState& B);
// Vertex-Poisson product A_{n} B = lim ε⁻¹ A_(n) B for n ≥ 0; the commutative product for n = −1.
CState classical_bracket(const FockContext& fc, const CState& A, int n, const CState& B);

// ω_ξ = ε⁻¹(½ b^i_{-1} b_{i,-1} + ξ_{-2})|0⟩ and its classical limit ω̄_ξ.
QState conformal_vector(const FockContext& fc, const Xi& xi);
CState conformal_vector_classical(const FockContext& fc, const CartanVector& xi);

// Formal coordinate change μ(s) = c1 s + c2 s² + … and its exponential data.
struct CoordChange {
    int order = 0;
    QVec c;  // c[0]=c1, …
    QVec v;  // v[0]=v0, v[1]=v1, …
};
CoordChange aut_O_decompose(const QVec& coeffs, int N);
// Re-expands exp(Σ v_n s^{n+1}∂_s) v0 s to order N.
QVec aut_O_expand(const QVec& v, int N);
// R(μ) = exp(−Σ v_n L_n) v0^{−L0} with classical L_n.
CState aut_O_act(const FockContext& fc, const CoordChange& mu, const CState& v, const CartanVector& xi);
// (μ1 ∗ μ2)(s) = μ2(μ1(s)) truncated at order N.
QVec compose_series(const QVec& outer, const QVec& inner, int N);

// All monomials of given grade in `colours` basis indices (listed), in canonical order.
std::vector<Mono> monomials_of_grade(const std::vector<int>& colours, int g);

template <class C>
std::string state_str(const FockElement<C>& v) {
    if (v.terms.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : v.terms) {
        if (!s.empty()) s += " + ";
        s += "(" + coeff_str(c) + ")";
        for (char16_t x : m) s += "b" + std::to_string(code_index(x)) + "[" + std::to_string(code_mode(x)) + "]";
    }
    return s;
}

}  // namespace affop
