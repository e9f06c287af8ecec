#include "affop/poly.hpp"

#include <algorithm>
#include <cctype>

namespace affop {

Poly Poly::linear_power(const Q& a, int k) {
    Poly r(Q(1));
    const Poly lin(QVec{-a, 1});
    for (int i = 0; i < k; ++i) r = r * lin;
    return r;
}

Q Poly::eval(const Q& z) const {
    Q r = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * z + *it;
    return r;
}

Poly Poly::deriv() const {
    QVec d;
    for (size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * Q(static_cast<long>(k)));
    return Poly(d);
}

Poly Poly::shifted(const Q& a) const {
    // Horner in (z + a)
    Poly r;
    const Poly lin(QVec{a, 1});
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * lin + Poly(*it);
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    if (o.c.size() > c.size()) c.resize(o.c.size());
    for (size_t k = 0; k < o.c.size(); ++k) c[k] += o.c[k];
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.c.size() > c.size()) c.resize(o.c.size());
    for (size_t k = 0; k < o.c.size(); ++k) c[k] -= o.c[k];
    trim();
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    QVec r(a.c.size() + b.c.size() - 1);
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return Poly(r);
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw Error("DivisionByZero", "polynomial division by zero");
    Poly r = a;
    QVec q(std::max(0, a.degree() - b.degree() + 1));
    while (!r.is_zero() && r.degree() >= b.degree()) {
        const int s = r.degree() - b.degree();
        const Q f = r.lead() / b.lead();
        q[s] = f;
        for (int k = 0; k <= b.degree(); ++k) r.c[k + s] -= f * b.c[k];
        r.trim();
    }
    return {Poly(q), r};
}

Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = divmod(a, b).second;
        if (!r.is_zero()) {
            const Q l = r.lead();
            for (auto& x : r.c) x /= l;
        }
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    const Q l = a.lead();
    for (auto& x : a.c) x /= l;
    return a;
}

std::string poly_str(const Poly& p, const std::string& var) {
    if (p.is_zero()) return "0";
    std::string s;
    for (int k = p.degree(); k >= 0; --k) {
        const Q& c = p.c[k];
        if (c == 0) continue;
        std::string t = qstr(abs(c));
        const bool neg = c < 0;
        if (s.empty())
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        if (k == 0) {
            s += t;
        } else {
            if (abs(c) != 1) s += t + "*";
            s += var;
            if (k > 1) s += "^" + std::to_string(k);
        }
    }
    return s;
}

void RatFunc::normalize() {
    if (den.is_zero()) throw Error("DivisionByZero", "rational function with zero denominator");
    if (num.is_zero()) {
        den = Poly(Q(1));
        return;
    }
    Poly g = gcd(num, den);
    if (g.degree() > 0) {
        num = divmod(num, g).first;
        den = divmod(den, g).first;
    }
    const Q l = den.lead();
    if (l != 1) {
        for (auto& x : num.c) x /= l;
        for (auto& x : den.c) x /= l;
    }
}

RatFunc RatFunc::deriv() const {
    if (den.degree() == 0) return RatFunc(num.deriv());
    const Poly g = gcd(den, den.deriv());
    const Poly dg = divmod(den, g).first;
    return RatFunc(num.deriv() * dg - num * divmod(den.deriv(), g).first, den * dg);
}

RatFunc RatFunc::inverse() const {
    if (is_zero()) throw Error("DivisionByZero", "inverse of the zero function");
    return RatFunc(den, num);
}

Q RatFunc::eval(const Q& z) const {
    const Q d = den.eval(z);
    if (d == 0) throw Error("DivisionByZero", "evaluation at a pole");
    return num.eval(z) / d;
}

int RatFunc::degree_at_infinity() const { return is_zero() ? -(1 << 20) : num.degree() - den.degree(); }

namespace {

int root_multiplicity(Poly p, const Q& a) {
    if (p.is_zero()) return 0;
    int k = 0;
    const Poly lin(QVec{-a, 1});
    while (p.eval(a) == 0) {
        p = divmod(p, lin).first;
        ++k;
    }
    return k;
}

}  // namespace

int RatFunc::pole_order(const Q& a) const {
    if (is_zero()) return 0;
    return root_multiplicity(den, a) - root_multiplicity(num, a);
}

std::pair<int, QVec> RatFunc::laurent(const Q& a, int count) const {
    if (is_zero()) return {0, QVec(count)};
    Poly n = num.shifted(a), d = den.shifted(a);
    int vn = 0, vd = 0;
    while (n.coeff(vn) == 0) ++vn;
    while (d.coeff(vd) == 0) ++vd;
    // (w^vn n1)/(w^vd d1), d1(0) ≠ 0
    QVec out(count);
    const Q d0 = d.coeff(vd);
    for (int k = 0; k < count; ++k) {
        Q s = n.coeff(vn + k);
        for (int j = 1; j <= k; ++j) s -= d.coeff(vd + j) * out[k - j];
        out[k] = s / d0;
    }
    return {vn - vd, out};
}

Q RatFunc::residue(const Q& a) const {
    const int p = pole_order(a);
    if (p <= 0) return 0;
    auto [e, co] = laurent(a, p);
    return co[-1 - e];
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (den == o.den) {
        num += o.num;
        normalize();
        return *this;
    }
    // both operands are reduced: only the common factor of the denominators can cancel
    const Poly g = gcd(den, o.den);
    if (g.degree() == 0) {
        num = num * o.den + o.num * den;
        den = den * o.den;
        return *this;
    }
    const Poly d1 = divmod(den, g).first, d2 = divmod(o.den, g).first;
    Poly t = num * d2 + o.num * d1;
    if (t.is_zero()) return *this = RatFunc();
    const Poly g2 = gcd(t, g);
    num = divmod(t, g2).first;
    den = d1 * divmod(o.den, g2).first;
    const Q l = den.lead();
    if (l != 1) {
        for (auto& x : num.c) x /= l;
        for (auto& x : den.c) x /= l;
    }
    return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
    if (is_zero() || o.is_zero()) return *this = RatFunc();
    const Poly g1 = gcd(num, o.den), g2 = gcd(o.num, den);
    num = divmod(num, g1).first * divmod(o.num, g2).first;
    den = divmod(den, g2).first * divmod(o.den, g1).first;
    const Q l = den.lead();
    if (l != 1) {
        for (auto& x : num.c) x /= l;
        for (auto& x : den.c) x /= l;
    }
    return *this;
}

std::string ratfunc_str(const RatFunc& f, const std::string& var) {
    if (f.den == Poly(Q(1))) return poly_str(f.num, var);
    return "(" + poly_str(f.num, var) + ")/(" + poly_str(f.den, var) + ")";
}

namespace {

Poly parse_poly(std::string s) {
    std::string t;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
    if (t.empty()) throw Error("ParseError", "empty polynomial");
    Poly p;
    size_t i = 0;
    while (i < t.size()) {
        Q sign = 1;
        if (t[i] == '+' || t[i] == '-') {
            if (t[i] == '-') sign = -1;
            ++i;
        }
        size_t j = i;
        while (j < t.size() && t[j] != '+' && t[j] != '-') ++j;
        std::string term = t.substr(i, j - i);
        if (term.empty()) throw Error("ParseError", "bad polynomial '" + s + "'");
        Q coef = 1;
        int pw = 0;
        auto zp = term.find('z');
        if (zp == std::string::npos) {
            coef = parse_q(term);
        } else {
            std::string cs = term.substr(0, zp);
            if (!cs.empty()) {
                if (cs.back() != '*') throw Error("ParseError", "bad term '" + term + "'");
                cs.pop_back();
                coef = parse_q(cs);
            }
            std::string ps = term.substr(zp + 1);
            pw = 1;
            if (!ps.empty()) {
                if (ps[0] != '^') throw Error("ParseError", "bad term '" + term + "'");
                pw = std::stoi(ps.substr(1));
            }
        }
        QVec v(pw + 1);
        v[pw] = sign * coef;
        p += Poly(v);
        i = j;
    }
    return p;
}

std::string strip_parens(std::string s) {
    while (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
    return s;
}

}  // namespace

RatFunc parse_ratfunc(const std::string& s) {
    int depth = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (s[i] == '/' && depth == 0) {
            // distinguish p/q rationals inside terms: a top-level '/' next to ')' separates num/den
            if (i > 0 && s[i - 1] == ')') return RatFunc(parse_poly(strip_parens(s.substr(0, i))), parse_poly(strip_parens(s.substr(i + 1))));
        }
    }
    return RatFunc(parse_poly(strip_parens(s)));
}

}  // namespace affop
