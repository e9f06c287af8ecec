#pragma once

#include "affop/rational.hpp"

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

namespace affop {

// Laurent polynomial in ε with rational coefficients; c[k] is the coefficient of ε^(lo+k).
class EpsScalar {
public:
    EpsScalar() = default;
    EpsScalar(const Q& q) { if (q != 0) { lo_ = 0; c_.push_back(q); } }
    EpsScalar(long v) : EpsScalar(Q(v)) {}
    static EpsScalar eps(int power = 1, const Q& q = 1) {
        EpsScalar r;
        if (q != 0) { r.lo_ = power; r.c_.push_back(q); }
        return r;
    }

    bool is_zero() const { return c_.empty(); }
    int low() const { return lo_; }
    int high() const { return lo_ + static_cast<int>(c_.size()) - 1; }
    Q coeff(int k) const {
        if (c_.empty() || k < lo_ || k > high()) return 0;
        return c_[k - lo_];
    }

    EpsScalar& operator+=(const EpsScalar& o) {
        if (o.c_.empty()) return *this;
        if (c_.empty()) return *this = o;
        int nlo = std::min(lo_, o.lo_), nhi = std::max(high(), o.high());
        if (nlo != lo_ || nhi != high()) {
            std::vector<Q> n(nhi - nlo + 1);
            for (size_t k = 0; k < c_.size(); ++k) n[lo_ - nlo + k] = c_[k];
            c_.swap(n);
            lo_ = nlo;
        }
        for (size_t k = 0; k < o.c_.size(); ++k) c_[o.lo_ - lo_ + k] += o.c_[k];
        trim();
        return *this;
    }
    EpsScalar& operator-=(const EpsScalar& o) { return *this += -o; }
    EpsScalar operator-() const {
        EpsScalar r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend EpsScalar operator+(EpsScalar a, const EpsScalar& b) { return a += b; }
    friend EpsScalar operator-(EpsScalar a, const EpsScalar& b) { return a -= b; }
    friend EpsScalar operator*(const EpsScalar& a, const EpsScalar& b) {
        EpsScalar r;
        if (a.c_.empty() || b.c_.empty()) return r;
        r.lo_ = a.lo_ + b.lo_;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, Q(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        r.trim();
        return r;
    }
    EpsScalar& operator*=(const EpsScalar& o) { return *this = *this * o; }
    EpsScalar& operator*=(const Q& q) {
        if (q == 0) { c_.clear(); lo_ = 0; return *this; }
        for (auto& x : c_) x *= q;
        return *this;
    }
    // Multiply by ε^k.
    EpsScalar shifted(int k) const {
        EpsScalar r = *this;
        if (!r.c_.empty()) r.lo_ += k;
        return r;
    }
    friend bool operator==(const EpsScalar& a, const EpsScalar& b) { return a.lo_ == b.lo_ && a.c_ == b.c_; }
    friend bool operator!=(const EpsScalar& a, const EpsScalar& b) { return !(a == b); }

    std::string str() const {
        if (c_.empty()) return "0";
        std::string s;
        for (size_t k = 0; k < c_.size(); ++k) {
            if (c_[k] == 0) continue;
            if (!s.empty()) s += " + ";
            int p = lo_ + static_cast<int>(k);
            s += qstr(c_[k]);
            if (p != 0) s += "*eps^" + std::to_string(p);
        }
        return s;
    }

private:
    void trim() {
        size_t b = 0;
        while (b < c_.size() && c_[b] == 0) ++b;
        if (b == c_.size()) { c_.clear(); lo_ = 0; return; }
        size_t e = c_.size();
        while (c_[e - 1] == 0) --e;
        if (b || e != c_.size()) c_ = std::vector<Q>(c_.begin() + b, c_.begin() + e);
        lo_ += static_cast<int>(b);
    }
    int lo_ = 0;
    std::vector<Q> c_;
};

inline std::ostream& operator<<(std::ostream& os, const EpsScalar& e) { return os << e.str(); }

// Uniform scalar helpers so module templates work for Q and EpsScalar alike.
inline bool is_zero(const Q& q) { return q == 0; }
inline bool is_zero(const EpsScalar& e) { return e.is_zero(); }
inline std::string coeff_str(const Q& q) { return qstr(q); }
inline std::string coeff_str(const EpsScalar& e) { return e.str(); }

}  // namespace affop
