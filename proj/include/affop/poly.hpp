#pragma once

#include "affop/rational.hpp"

#include <string>
#include <utility>
#include <vector>

namespace affop {

// Univariate polynomial over Q, coefficients low to high, no trailing zeros.
struct Poly {
    QVec c;

    Poly() = default;
    Poly(const Q& q) {
        if (q != 0) c.push_back(q);
    }
    explicit Poly(QVec v) : c(std::move(v)) { trim(); }
    static Poly x() { return Poly(QVec{0, 1}); }
    // (z − a)^k
    static Poly linear_power(const Q& a, int k);

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }  // −1 for zero
    Q coeff(int k) const { return k >= 0 && k < static_cast<int>(c.size()) ? c[k] : Q(0); }
    Q lead() const { return c.empty() ? Q(0) : c.back(); }
    Q eval(const Q& z) const;
    Poly deriv() const;
    // p(z + a)
    Poly shifted(const Q& a) const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(Poly a) {
        for (auto& x : a.c) x = -x;
        return a;
    }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend bool operator==(const Poly& a, const Poly& b) { return a.c == b.c; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
};

// a = q·b + r with deg r < deg b.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly gcd(Poly a, Poly b);  // monic (zero if both zero)
std::string poly_str(const Poly& p, const std::string& var = "z");

// Exact rational function num/den with den monic and gcd(num, den) = 1.
struct RatFunc {
    Poly num, den{Q(1)};

    RatFunc() = default;
    RatFunc(const Q& q) : num(q) {}
    RatFunc(Poly n) : num(std::move(n)) {}
    RatFunc(Poly n, Poly d) : num(std::move(n)), den(std::move(d)) { normalize(); }
    static RatFunc z() { return RatFunc(Poly::x()); }
    // Caller guarantees gcd(n, d) = 1 and d monic.
    static RatFunc from_coprime(Poly n, Poly d) {
        RatFunc r;
        r.num = std::move(n);
        r.den = std::move(d);
        if (r.num.is_zero()) r.den = Poly(Q(1));
        return r;
    }
    // 1 / (z − a)^k
    static RatFunc pole(const Q& a, int k) { return RatFunc(Poly(Q(1)), Poly::linear_power(a, k)); }

    void normalize();
    bool is_zero() const { return num.is_zero(); }
    RatFunc deriv() const;
    RatFunc inverse() const;
    Q eval(const Q& z) const;
    // deg num − deg den (behaviour z^d at ∞); very negative for zero.
    int degree_at_infinity() const;
    // Order of the pole at a (≤ 0 when regular; zero function gives 0).
    int pole_order(const Q& a) const;
    // Laurent coefficients at a: returns (lowest exponent e, coefficients of (z−a)^{e}, …, (z−a)^{e+count−1}).
    std::pair<int, QVec> laurent(const Q& a, int count) const;
    Q residue(const Q& a) const;

    RatFunc& operator+=(const RatFunc& o);
    RatFunc& operator-=(const RatFunc& o);
    RatFunc& operator*=(const RatFunc& o);
    friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
    friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
    friend RatFunc operator-(RatFunc a) {
        a.num = -a.num;
        return a;
    }
    friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }
    friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }
};

inline bool is_zero(const RatFunc& f) { return f.is_zero(); }
inline RatFunc deriv(const RatFunc& f) { return f.deriv(); }
std::string ratfunc_str(const RatFunc& f, const std::string& var = "z");
// Parses "p(z)/q(z)"-style expressions produced by ratfunc_str (sums of rational multiples of z^k, optional single division).
RatFunc parse_ratfunc(const std::string& s);

}  // namespace affop
