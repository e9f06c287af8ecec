#include "affop/fock.hpp"

#include "affop/linalg.hpp"

#include <algorithm>

namespace affop {

Mono mono_mul(const Mono& a, const Mono& b) {
    Mono r;
    r.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

Mono mono_insert(const Mono& m, char16_t c) {
    Mono r = m;
    r.insert(std::upper_bound(r.begin(), r.end(), c), c);
    return r;
}

int mono_remove(Mono& m, char16_t c) {
    auto [lo, hi] = std::equal_range(m.begin(), m.end(), c);
    int k = static_cast<int>(hi - lo);
    if (k) m.erase(lo);
    return k;
}

CState classical_part(const QState& v, int power) {
    CState r(v.weight);
    for (const auto& [m, c] : v.terms) r.add(m, c.coeff(power));
    return r;
}

QState lift(const CState& v) {
    QState r(v.weight);
    for (const auto& [m, c] : v.terms) r.add(m, EpsScalar(c));
    return r;
}

FockContext::FockContext(const CartanData& c) : cd(&c), ginv(inverse(c.gram)) {}

Q FockContext::pair_basis(const CartanVector& a, size_t j) const {
    Q s = 0;
    for (size_t k = 0; k < a.size(); ++k)
        if (a[k] != 0) s += a[k] * cd->gram[k][j];
    return s;
}

Xi xi_rho_check(const CartanData& cd) { return {-cd.rho_check, cd.zero()}; }
Xi xi_quantum_default(const CartanData& cd) { return {-cd.rho_check, cd.rho}; }

namespace {

const EpsScalar kEps = EpsScalar::eps(1);

// Accumulate c·(creation mode a_n)·m into r.
template <class C>
void add_times_mode(FockElement<C>& r, const Mono& m, const C& c, const CartanVector& a, int n) {
    for (size_t j = 0; j < a.size(); ++j)
        if (a[j] != 0) r.add(mono_insert(m, mode_code(static_cast<int>(j), n)), C(a[j]) * c);
}

// Accumulate c·Σ_l (a, b_l) ∂/∂b_{l,−p} m into r (p>0).
template <class C>
void add_contract(FockElement<C>& r, const FockContext& fc, const Mono& m, const C& c, const CartanVector& a, int p) {
    const size_t d = a.size();
    for (size_t l = 0; l < d; ++l) {
        Q w = fc.pair_basis(a, l);
        if (w == 0) continue;
        Mono mm = m;
        int k = mono_remove(mm, mode_code(static_cast<int>(l), -p));
        if (k) r.add(mm, C(w * k) * c);
    }
}

}  // namespace

QState apply_mode(const FockContext& fc, const CartanVector& a, int n, const QState& v) {
    QState r(v.weight);
    for (const auto& [m, c] : v.terms) {
        if (n < 0) {
            add_times_mode(r, m, c, a, n);
        } else if (n == 0) {
            r.add(m, EpsScalar::eps(1, fc.cd->bilin(v.weight, a)) * c);
        } else {
            add_contract(r, fc, m, EpsScalar::eps(1, Q(n)) * c, a, n);
        }
    }
    return r;
}

QState virasoro(const FockContext& fc, int n, const Xi& xi, const QState& v) {
    const CartanData& cd = *fc.cd;
    const size_t d = cd.dim();
    const CartanVector& lam = v.weight;
    QState r(v.weight);
    const EpsScalar half_inv_eps = EpsScalar::eps(-1, frac(1, 2));
    for (const auto& [m, c] : v.terms) {
        const int G = grade(m);
        // both creation
        for (int m1 = n + 1; m1 <= -1; ++m1) {
            const int k = n - m1;
            EpsScalar cc = half_inv_eps * c;
            for (size_t i = 0; i < d; ++i)
                for (size_t j = 0; j < d; ++j) {
                    if (fc.ginv[i][j] == 0) continue;
                    Mono mm = mono_insert(mono_insert(m, mode_code(static_cast<int>(j), m1)), mode_code(static_cast<int>(i), k));
                    r.add(mm, EpsScalar(fc.ginv[i][j]) * cc);
                }
        }
        // one creation, one annihilation (both orders combined)
        for (int p = std::max(1, n + 1); p <= G; ++p) {
            const int neg = n - p;
            for (size_t j = 0; j < d; ++j) {
                Mono mm = m;
                int k = mono_remove(mm, mode_code(static_cast<int>(j), -p));
                if (!k) continue;
                r.add(mono_insert(mm, mode_code(static_cast<int>(j), neg)), EpsScalar(Q(p * k)) * c);
            }
        }
        // both annihilation
        for (int p = 1; p < n && p <= G; ++p) {
            const int q = n - p;
            if (q > G) continue;
            EpsScalar cc = EpsScalar::eps(1, frac(p * q, 2)) * c;
            for (size_t l = 0; l < d; ++l) {
                Mono m1 = m;
                int k1 = mono_remove(m1, mode_code(static_cast<int>(l), -p));
                if (!k1) continue;
                for (size_t s = 0; s < d; ++s) {
                    if (cd.gram[l][s] == 0) continue;
                    Mono m2 = m1;
                    int k2 = mono_remove(m2, mode_code(static_cast<int>(s), -q));
                    if (k2) r.add(m2, EpsScalar(cd.gram[l][s] * k1 * k2) * cc);
                }
            }
        }
        // zero-mode pieces
        if (n < 0) {
            add_times_mode(r, m, c, lam, n);
        } else if (n > 0) {
            add_contract(r, fc, m, EpsScalar::eps(1, Q(n)) * c, lam, n);
        } else {
            r.add(m, EpsScalar::eps(1, cd.bilin(lam, lam) / 2) * c);
        }
        // −((n+1)/ε) ξ_n
        if (n + 1 != 0) {
            const Q f = -(n + 1);
            if (n < 0) {
                add_times_mode(r, m, EpsScalar::eps(-1, f) * c, xi.x0, n);
                add_times_mode(r, m, EpsScalar(f) * c, xi.x1, n);
            } else if (n > 0) {
                add_contract(r, fc, m, EpsScalar(f * n) * c, xi.x0, n);
                add_contract(r, fc, m, EpsScalar::eps(1, f * n) * c, xi.x1, n);
            } else {
                EpsScalar s = EpsScalar(-cd.bilin(xi.x0, lam)) + EpsScalar::eps(1, -cd.bilin(xi.x1, lam));
                r.add(m, s * c);
            }
        }
    }
    return r;
}

CState virasoro_classical(const FockContext& fc, int n, const CartanVector& xi, const CState& v) {
    if (n < -1) throw Error("DomainError", "classical L_n needs n >= -1");
    const CartanData& cd = *fc.cd;
    CState r(v.weight);
    for (const auto& [m, c] : v.terms) {
        for (size_t k = 0; k < m.size(); ++k) {
            if (k > 0 && m[k] == m[k - 1]) continue;
            int mult = 0;
            for (size_t q = k; q < m.size() && m[q] == m[k]; ++q) ++mult;
            const int j = code_index(m[k]);
            const int p = code_mode(m[k]);
            if (n + p > 0) continue;
            Mono mm = m;
            mono_remove(mm, m[k]);
            if (n + p < 0) {
                r.add(mono_insert(mm, mode_code(j, n + p)), Q(-p * mult) * c);
            } else {
                Q w = fc.pair_basis(xi, static_cast<size_t>(j));
                r.add(mm, Q(-n * (n + 1) * mult) * w * c);
            }
        }
        if (n == -1) {
            add_times_mode(r, m, c, v.weight, -1);
        } else if (n == 0) {
            r.add(m, -cd.bilin(xi, v.weight) * c);
        }
    }
    return r;
}

namespace {

QState op_mono(const FockContext& fc, const Mono& M, int n, const QState& C);

QState op_state(const FockContext& fc, const QState& A, int n, const QState& C) {
    QState r(A.weight + C.weight);
    for (const auto& [m, c] : A.terms) {
        QState t = op_mono(fc, m, n, C);
        t *= c;
        r += t;
    }
    return r;
}

QState op_mono(const FockContext& fc, const Mono& M, int n, const QState& C) {
    const size_t d = fc.cd->dim();
    if (M.empty()) {
        if (n == -1) return C;
        return QState(C.weight);
    }
    const int j = code_index(M[0]);
    const int k = -code_mode(M[0]);
    const Mono rest = M.substr(1);
    const int gA = grade(rest);
    const int gC = C.max_grade();
    CartanVector bj(d);
    bj[j] = 1;
    QState r(C.weight);
    for (int jj = 0; jj <= gA + gC - 1 - n; ++jj) {
        QState t = op_mono(fc, rest, n + jj, C);
        if (t.is_zero()) continue;
        t = apply_mode(fc, bj, -k - jj, t);
        t *= EpsScalar(binom(k + jj - 1, jj));
        r += t;
    }
    const EpsScalar sgn = (k % 2 == 0) ? EpsScalar(-1) : EpsScalar(1);
    for (int jj = 1; jj <= gC; ++jj) {
        QState ac = apply_mode(fc, bj, jj, C);
        if (ac.is_zero()) continue;
        QState t = op_mono(fc, rest, n - k - jj, ac);
        t *= EpsScalar(binom(k + jj - 1, jj)) * sgn;
        r += t;
    }
    return r;
}

}  // namespace

QState nth_product(const FockContext& fc, const QState& A, int n, const QState& B) { return op_state(fc, A, n, B); }

CState classical_bracket(const FockContext& fc, const CState& A, int n, const CState& B) {
    return classical_limit(nth_product(fc, lift(A), n, lift(B)), n >= 0 ? 1 : 0);
}

CState classical_limit(const QState& v, int power) {
    for (const auto& [m, c] : v.terms)
        if (c.low() < power) throw Error("NegativeEpsPower", "classical extraction meets a divergent term");
    return classical_part(v, power);
}

QState conformal_vector(const FockContext& fc, const Xi& xi) {
    const size_t d = fc.cd->dim();
    QState r(fc.cd->zero());
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j)
            if (fc.ginv[i][j] != 0)
                r.add(mono_insert(Mono(1, mode_code(static_cast<int>(i), -1)), mode_code(static_cast<int>(j), -1)),
                      EpsScalar::eps(-1, fc.ginv[i][j] / 2));
    for (size_t j = 0; j < d; ++j) {
        if (xi.x0[j] != 0) r.add(Mono(1, mode_code(static_cast<int>(j), -2)), EpsScalar::eps(-1, xi.x0[j]));
        if (xi.x1[j] != 0) r.add(Mono(1, mode_code(static_cast<int>(j), -2)), EpsScalar(xi.x1[j]));
    }
    return r;
}

CState conformal_vector_classical(const FockContext& fc, const CartanVector& xi) {
    return classical_part(conformal_vector(fc, {xi, fc.cd->zero()}), -1);
}

QVec aut_O_expand(const QVec& v, int N) {
    QVec f(N + 1);  // f[k] = coefficient of s^k
    if (N >= 1) f[1] = v[0];
    QVec term = f, total = f;
    for (int it = 1; it <= N; ++it) {
        QVec nx(N + 1);
        for (size_t n = 1; n < v.size(); ++n) {
            if (v[n] == 0) continue;
            for (int k = 1; k + static_cast<int>(n) <= N; ++k)
                if (term[k] != 0) nx[k + n] += v[n] * k * term[k];
        }
        for (auto& x : nx) x /= it;
        bool nz = false;
        for (int k = 0; k <= N; ++k) {
            total[k] += nx[k];
            nz = nz || nx[k] != 0;
        }
        if (!nz) break;
        term = nx;
    }
    return QVec(total.begin() + 1, total.end());
}

CoordChange aut_O_decompose(const QVec& coeffs, int N) {
    if (coeffs.empty() || coeffs[0] == 0) throw Error("NotInvertible", "mu'(0) must be nonzero");
    CoordChange cc;
    cc.order = N;
    cc.c = coeffs;
    cc.c.resize(N);
    cc.v.assign(N, Q(0));
    cc.v[0] = cc.c[0];
    for (int k = 1; k < N; ++k) {
        QVec e = aut_O_expand(cc.v, k + 1);
        cc.v[k] = (cc.c[k] - e[k]) / cc.v[0];
    }
    return cc;
}

CState aut_O_act(const FockContext& fc, const CoordChange& mu, const CState& v, const CartanVector& xi) {
    const CartanData& cd = *fc.cd;
    const Q shift = -cd.bilin(xi, v.weight);
    CState scaled(v.weight);
    for (const auto& [m, c] : v.terms) {
        Q e = Q(grade(m)) + shift;
        if (e.get_den() != 1) throw Error("NonIntegralWeight", "L0 eigenvalue is not an integer");
        scaled.add(m, c * qpow(1 / mu.v[0], e.get_num().get_si()));
    }
    auto X = [&](const CState& s) {
        CState r(s.weight);
        for (size_t n = 1; n < mu.v.size(); ++n) {
            if (mu.v[n] == 0) continue;
            CState t = virasoro_classical(fc, static_cast<int>(n), xi, s);
            t *= -mu.v[n];
            r += t;
        }
        return r;
    };
    CState total = scaled, term = scaled;
    for (int k = 1; !term.is_zero(); ++k) {
        term = X(term);
        term *= frac(1, k);
        total += term;
    }
    return total;
}

QVec compose_series(const QVec& outer, const QVec& inner, int N) {
    // powers of inner
    QVec res(N);
    QVec pw(N);  // inner^1
    for (int k = 0; k < N && k < static_cast<int>(inner.size()); ++k) pw[k] = inner[k];
    for (int e = 1; e <= N && e <= static_cast<int>(outer.size()); ++e) {
        for (int k = 0; k < N; ++k) res[k] += outer[e - 1] * pw[k];
        QVec nx(N);
        for (int a = 0; a < N; ++a) {
            if (pw[a] == 0) continue;
            for (int b = 0; a + b + 1 < N && b < static_cast<int>(inner.size()); ++b) nx[a + b + 1] += pw[a] * inner[b];
        }
        pw = nx;
    }
    return res;
}

std::vector<Mono> monomials_of_grade(const std::vector<int>& colours, int g) {
    std::vector<char16_t> codes;
    for (int j : colours)
        for (int n = 1; n <= std::max(g, 1); ++n) codes.push_back(mode_code(j, -n));
    std::sort(codes.begin(), codes.end());
    std::vector<Mono> out;
    Mono cur;
    auto rec = [&](auto&& self, size_t from, int left) -> void {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (size_t k = from; k < codes.size(); ++k) {
            int w = codes[k] & 0xff;
            if (w > left) continue;
            cur.push_back(codes[k]);
            self(self, k, left - w);
            cur.pop_back();
        }
    };
    rec(rec, 0, g);
    return out;
}

}  // namespace affop
