#pragma once

#include "affop/fock.hpp"

#include <algorithm>
#include <climits>
#include <optional>
#include <vector>

namespace affop {

// Polynomial in the coordinate functions u_{k,n} ≅ b_{k,n} (a weight-free view of π₀).
struct FunPoly {
    std::map<Mono, Q> terms;

    FunPoly() = default;
    FunPoly(const Q& q) {
        if (q != 0) terms.emplace(Mono(), q);
    }
    static FunPoly var(int k, int n) {
        FunPoly f;
        f.terms.emplace(Mono(1, mode_code(k, n)), Q(1));
        return f;
    }
    static FunPoly from_state(const CState& v) {
        FunPoly f;
        f.terms = v.terms;
        return f;
    }
    CState to_state(const CartanVector& w) const {
        CState s(w);
        s.terms = terms;
        return s;
    }
    bool is_zero() const { return terms.empty(); }
    std::optional<Q> as_rational() const {
        if (terms.empty()) return Q(0);
        if (terms.size() == 1 && terms.begin()->first.empty()) return terms.begin()->second;
        return std::nullopt;
    }
    void add(const Mono& m, const Q& c) {
        if (c == 0) return;
        auto [it, ins] = terms.emplace(m, c);
        if (!ins) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }
    FunPoly& operator+=(const FunPoly& o) {
        for (const auto& [m, c] : o.terms) add(m, c);
        return *this;
    }
    FunPoly& operator-=(const FunPoly& o) {
        for (const auto& [m, c] : o.terms) add(m, -c);
        return *this;
    }
    FunPoly& operator*=(const Q& q) {
        if (q == 0) terms.clear();
        for (auto& [m, c] : terms) c *= q;
        return *this;
    }
    friend FunPoly operator+(FunPoly a, const FunPoly& b) { return a += b; }
    friend FunPoly operator-(FunPoly a, const FunPoly& b) { return a -= b; }
    friend FunPoly operator-(FunPoly a) { return a *= Q(-1); }
    friend FunPoly operator*(const FunPoly& a, const FunPoly& b) {
        FunPoly r;
        for (const auto& [ma, ca] : a.terms)
            for (const auto& [mb, cb] : b.terms) r.add(mono_mul(ma, mb), ca * cb);
        return r;
    }
    friend bool operator==(const FunPoly& a, const FunPoly& b) { return a.terms == b.terms; }
    friend bool operator!=(const FunPoly& a, const FunPoly& b) { return !(a == b); }
};

inline bool is_zero(const FunPoly& f) { return f.is_zero(); }
inline std::optional<Q> as_rational(const Q& q) { return q; }
inline std::optional<Q> as_rational(const FunPoly& f) { return f.as_rational(); }

// Truncated power series Σ_{k<order} c_k t^k; order = kExact marks an exact polynomial.
template <class C>
struct Series {
    static constexpr int kExact = INT_MAX;
    int order = kExact;
    std::vector<C> c;

    Series() = default;
    Series(const Q& q) {
        if (q != 0) c.push_back(C(q));
    }
    Series(std::vector<C> v, int ord) : order(ord), c(std::move(v)) { trim(); }
    static Series t_power(int k, int ord = kExact) {
        std::vector<C> v(k + 1, C(Q(0)));
        v[k] = C(Q(1));
        return Series(v, ord);
    }

    void trim() {
        if (order != kExact && static_cast<int>(c.size()) > order) c.resize(order);
        while (!c.empty() && affop::is_zero(c.back())) c.pop_back();
    }
    C coeff(int k) const { return k < static_cast<int>(c.size()) ? c[k] : C(Q(0)); }
    bool is_zero() const { return c.empty(); }
    bool is_exact() const { return order == kExact; }

    Series& operator+=(const Series& o) {
        order = std::min(order, o.order);
        if (o.c.size() > c.size()) c.resize(o.c.size(), C(Q(0)));
        for (size_t k = 0; k < o.c.size(); ++k) c[k] += o.c[k];
        trim();
        return *this;
    }
    Series& operator-=(const Series& o) {
        order = std::min(order, o.order);
        if (o.c.size() > c.size()) c.resize(o.c.size(), C(Q(0)));
        for (size_t k = 0; k < o.c.size(); ++k) c[k] -= o.c[k];
        trim();
        return *this;
    }
    Series& operator*=(const Q& q) {
        for (auto& x : c) x *= q;
        trim();
        return *this;
    }
    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator-(Series a) { return a *= Q(-1); }
    friend Series operator*(const Series& a, const Series& b) {
        Series r;
        r.order = std::min(a.order, b.order);
        if (a.c.empty() || b.c.empty()) return r;
        size_t n = a.c.size() + b.c.size() - 1;
        if (r.order != kExact) n = std::min(n, static_cast<size_t>(r.order));
        r.c.assign(n, C(Q(0)));
        for (size_t i = 0; i < a.c.size() && i < n; ++i)
            for (size_t j = 0; j < b.c.size() && i + j < n; ++j) r.c[i + j] += a.c[i] * b.c[j];
        r.trim();
        return r;
    }
    friend bool operator==(const Series& a, const Series& b) {
        const int ord = std::min(a.order, b.order);
        const size_t n = std::max(a.c.size(), b.c.size());
        for (size_t k = 0; k < n && (ord == kExact || static_cast<int>(k) < ord); ++k)
            if (a.coeff(static_cast<int>(k)) != b.coeff(static_cast<int>(k))) return false;
        return true;
    }
    friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }

    Series deriv() const {
        Series r;
        r.order = order == kExact ? kExact : std::max(order - 1, 0);
        for (size_t k = 1; k < c.size(); ++k) {
            C x = c[k];
            x *= Q(static_cast<long>(k));
            r.c.push_back(x);
        }
        r.trim();
        return r;
    }
    // ∫ with zero constant of integration.
    Series integral() const {
        Series r;
        r.order = order == kExact ? kExact : order + 1;
        r.c.push_back(C(Q(0)));
        for (size_t k = 0; k < c.size(); ++k) {
            C x = c[k];
            x *= Q(1) / Q(static_cast<long>(k + 1));
            r.c.push_back(x);
        }
        r.trim();
        return r;
    }
    // Truncates to a finite order (turns exact series into truncated ones).
    Series truncated(int ord) const {
        Series r = *this;
        r.order = std::min(order, ord);
        r.trim();
        return r;
    }
};

template <class C>
bool is_zero(const Series<C>& s) {
    return s.is_zero();
}
template <class C>
Series<C> deriv(const Series<C>& s) {
    return s.deriv();
}

template <class C>
bool is_unit(const Series<C>& s) {
    auto c0 = as_rational(s.coeff(0));
    return c0 && *c0 != 0;
}

// Multiplicative inverse; needs a nonzero rational constant term and a finite order.
template <class C>
Series<C> inverse(const Series<C>& s) {
    auto c0 = as_rational(s.coeff(0));
    if (!c0 || *c0 == 0) throw Error("NotInvertibleUnit", "series constant term is not an invertible scalar");
    if (s.c.size() == 1) return Series<C>(std::vector<C>{C(1 / *c0)}, s.order);
    if (s.order == Series<C>::kExact) throw Error("DomainError", "inverse of a non-constant exact series needs a truncation order");
    std::vector<C> r(s.order, C(Q(0)));
    r[0] = C(1 / *c0);
    for (int k = 1; k < s.order; ++k) {
        C acc(Q(0));
        for (int j = 1; j <= k; ++j) acc += s.coeff(j) * r[k - j];
        acc *= -1 / *c0;
        r[k] = acc;
    }
    return Series<C>(r, s.order);
}

template <class C>
Series<C> pow(const Series<C>& s, long e) {
    if (e < 0) return pow(inverse(s), -e);
    Series<C> r(Q(1)), b = s;
    r.order = s.order;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

// exp(f) for f with zero constant term: g' = f' g.
template <class C>
Series<C> exp_series(const Series<C>& f) {
    if (!is_zero(f.coeff(0))) throw Error("DomainError", "exp needs a zero constant term");
    if (f.order == Series<C>::kExact) throw Error("DomainError", "exp needs a truncation order");
    const int N = f.order;
    std::vector<C> g(N, C(Q(0)));
    g[0] = C(Q(1));
    for (int n = 1; n < N; ++n) {
        C acc(Q(0));
        for (int k = 1; k <= n; ++k) {
            C t = f.coeff(k) * g[n - k];
            t *= Q(k);
            acc += t;
        }
        acc *= Q(1) / Q(n);
        g[n] = acc;
    }
    return Series<C>(g, N);
}

// f(μ(s)) for μ(0) = 0.
template <class C>
Series<C> compose(const Series<C>& f, const Series<Q>& mu) {
    if (mu.coeff(0) != 0) throw Error("DomainError", "substituted series must vanish at 0");
    const int N = std::min(f.order, mu.order);
    if (N == Series<C>::kExact) throw Error("DomainError", "composition needs a truncation order");
    Series<C> r(std::vector<C>{}, N);
    Series<Q> pw(Q(1));
    pw.order = N;
    for (int k = 0; k < N && k < static_cast<int>(f.c.size()); ++k) {
        if (!is_zero(f.c[k])) {
            std::vector<C> term;
            for (const Q& q : pw.c) {
                C x = f.c[k];
                x *= q;
                term.push_back(x);
            }
            r += Series<C>(term, N);
        }
        pw = pw * mu;
    }
    return r;
}

}  // namespace affop
