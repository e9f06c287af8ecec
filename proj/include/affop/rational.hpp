#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace affop {

using Q = mpq_class;
using Z = mpz_class;

// Error carrying a stable kind tag (NotAffine, NegativeEpsPower, ...).
struct Error : std::runtime_error {
    std::string kind;
    Error(std::string k, const std::string& what)
        : std::runtime_error(k + ": " + what), kind(std::move(k)) {}
};

inline std::string qstr(const Q& q) { return q.get_str(); }

// Canonical p/q (the two-argument mpq_class constructor does not canonicalize).
inline Q frac(long p, long q) {
    Q r(p, q);
    r.canonicalize();
    return r;
}

// Accepts "p", "p/q", "-p/q" (also the unicode minus sign).
inline Q parse_q(std::string s) {
    const std::string umin = "\xE2\x88\x92";
    for (auto p = s.find(umin); p != std::string::npos; p = s.find(umin)) s.replace(p, umin.size(), "-");
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    if (s.empty()) throw Error("ParseError", "empty rational");
    Q q;
    if (q.set_str(s, 10) != 0) throw Error("ParseError", "bad rational '" + s + "'");
    q.canonicalize();
    if (q.get_den() == 0) throw Error("ParseError", "zero denominator");
    return q;
}

inline Q binom(long n, long k) {
    if (k < 0) return 0;
    Q r = 1;
    for (long i = 0; i < k; ++i) r = r * Q(n - i) / Q(i + 1);
    return r;
}

inline Q factorial(long n) {
    Z r = 1;
    for (long i = 2; i <= n; ++i) r *= i;
    return Q(r);
}

inline Q qpow(const Q& x, long n) {
    if (n < 0) return qpow(Q(1) / x, -n);
    Q r = 1, b = x;
    while (n) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

using QVec = std::vector<Q>;
using QMat = std::vector<QVec>;

}  // namespace affop
