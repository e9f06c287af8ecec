#include "affop/oper.hpp"

#include <algorithm>

namespace affop {

LoopType loop_type(const CartanData& cd) {
    const int ell = cd.ell;
    if (ell < 1 || ell > 3) throw Error("UnsupportedRealization", "loop realization covers A1^1, A2^1, A3^1 only");
    if (cd.A != builtin_matrix("A" + std::to_string(ell) + "^1"))
        throw Error("UnsupportedRealization", "loop realization needs the untwisted type A Cartan matrix in standard order");
    return {ell + 1, ell};
}

LoopKey e_key(int n, int i) { return i == 0 ? LoopKey{n, 1, 1} : LoopKey{i, i + 1, 0}; }
LoopKey f_key(int n, int i) { return i == 0 ? LoopKey{1, n, -1} : LoopKey{i + 1, i, 0}; }

LoopElement<Q> p_minus_one(int n) {
    LoopElement<Q> r(n);
    for (int i = 0; i < n; ++i) r.add(f_key(n, i), Q(1));
    return r;
}

std::vector<LoopElement<Q>> grade_basis(int n, int k) {
    std::vector<LoopElement<Q>> out;
    if (k == 0) {
        for (int a = 1; a < n; ++a) {
            LoopElement<Q> h(n);
            h.add({a, a, 0}, Q(1));
            h.add({a + 1, a + 1, 0}, Q(-1));
            out.push_back(h);
        }
        LoopElement<Q> c(n), r(n);
        c.add(LoopKey::central(), Q(1));
        r.add(LoopKey::rho(), Q(1));
        out.push_back(c);
        out.push_back(r);
        return out;
    }
    // off-diagonal units: (b − a) + m n = k
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) {
            if (a == b) continue;
            const int rem = k - (b - a);
            if (rem % n) continue;
            LoopElement<Q> e(n);
            e.add({a, b, rem / n}, Q(1));
            out.push_back(e);
        }
    if (k % n == 0) {
        const int m = k / n;
        for (int a = 1; a < n; ++a) {
            LoopElement<Q> h(n);
            h.add({a, a, m}, Q(1));
            h.add({a + 1, a + 1, m}, Q(-1));
            out.push_back(h);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.terms.begin()->first < y.terms.begin()->first; });
    return out;
}

namespace {

LoopElement<Q> p_one(int n) {
    LoopElement<Q> r(n);
    for (int i = 0; i < n; ++i) r.add(e_key(n, i), Q(1));
    return r;
}

// Matrix of X ↦ [X, y] from basis `dom` into key coordinates.
QMat ad_matrix(const std::vector<LoopElement<Q>>& dom, const LoopElement<Q>& y, int N, std::map<LoopKey, int>& rows) {
    std::vector<LoopElement<Q>> imgs;
    for (const auto& x : dom) imgs.push_back(bracket(x, y, N));
    for (const auto& im : imgs)
        for (const auto& [k, q] : im.terms) rows.emplace(k, 0);
    int r = 0;
    for (auto& [k, idx] : rows) idx = r++;
    QMat M(r, QVec(dom.size()));
    for (size_t j = 0; j < imgs.size(); ++j)
        for (const auto& [k, q] : imgs[j].terms) M[rows[k]][j] = q;
    return M;
}

}  // namespace

std::vector<LoopElement<Q>> p_generators(int n, int k) {
    if (k < 1) return {};
    const auto dom = grade_basis(n, k);
    std::map<LoopKey, int> rows;
    QMat M = ad_matrix(dom, p_one(n), k + 2, rows);
    QMat ns = M.empty() ? QMat() : null_space(M, static_cast<int>(dom.size()));
    if (M.empty())
        for (size_t j = 0; j < dom.size(); ++j) {
            QVec e(dom.size());
            e[j] = 1;
            ns.push_back(e);
        }
    std::vector<LoopElement<Q>> out;
    for (const QVec& x : ns) {
        LoopElement<Q> p(n);
        for (size_t j = 0; j < dom.size(); ++j)
            if (x[j] != 0)
                for (const auto& [key, q] : dom[j].terms) p.add(key, x[j] * q);
        if (p.is_zero()) continue;
        Q s = p.terms.begin()->second;
        if (k == 1) {
            // [p₁, p_{−1}] = K fixes the scale
            s = bracket(p, p_minus_one(n), 2).coeff(LoopKey::central());
        }
        LoopElement<Q> q(n);
        for (const auto& [key, c] : p.terms) q.add(key, c / s);
        out.push_back(q);
    }
    return out;
}

std::vector<int> exponents_from_loop(int n, int N) {
    std::vector<int> out;
    const LoopElement<Q> pm1 = p_minus_one(n);
    for (int k = 1; k <= N; ++k) {
        const auto up = grade_basis(n, k + 1);
        std::map<LoopKey, int> rows;
        QMat M = ad_matrix(up, pm1, k + 2, rows);
        const int rk = M.empty() ? 0 : rank(M, static_cast<int>(up.size()));
        const int d = static_cast<int>(grade_basis(n, k).size()) - rk;
        for (int q = 0; q < d; ++q) out.push_back(k);
    }
    return out;
}

LoopElement<Q> h_to_loop(const CartanData& cd, const CartanVector& x) {
    const int n = cd.ell + 1;
    LoopElement<Q> r(n);
    if (x[0] != 0) {
        r.add(LoopKey::central(), x[0]);
        r.add({1, 1, 0}, -x[0]);
        r.add({n, n, 0}, x[0]);
    }
    for (int i = 1; i < n; ++i)
        if (x[i] != 0) {
            r.add({i, i, 0}, x[i]);
            r.add({i + 1, i + 1, 0}, -x[i]);
        }
    if (x[n] != 0) r.add(LoopKey::rho(), x[n]);
    return r;
}

CartanVector loop_to_h(const CartanData& cd, const LoopElement<Q>& x) { return CartanVector(loop_to_h_r(cd, x)); }

std::vector<int> root_multidegree(int n, const LoopKey& k) {
    std::vector<int> d(n, 0);
    if (k.a <= 0) return d;
    int shift = k.m;
    if (k.a < k.b) {
        for (int j = k.a; j < k.b; ++j) d[j] += 1;
    } else if (k.a > k.b) {
        d[0] += 1;
        for (int j = 1; j < k.b; ++j) d[j] += 1;
        for (int j = k.a; j < n; ++j) d[j] += 1;
        shift -= 1;
    }
    for (auto& x : d) x += shift;
    return d;
}

std::string loop_str(const LoopElement<Q>& x) {
    if (x.is_zero()) return "0";
    std::string s;
    for (const auto& [k, c] : x.terms) {
        if (!s.empty()) s += " + ";
        s += "(" + qstr(c) + ")";
        if (k.is_central())
            s += "K";
        else if (k.is_rho())
            s += "rho";
        else
            s += "E" + std::to_string(k.a) + std::to_string(k.b) + "s^" + std::to_string(k.m);
    }
    return s;
}

Series<Q> ricatti_solve(const CartanData& cd, const std::vector<Series<Q>>& u, size_t i, const Q& c) {
    if (c == 0) return Series<Q>();
    const Series<Q> g = ricatti_infinitesimal(cd, u, i);
    Series<Q> den = Series<Q>(Q(1)) + Series<Q>(c) * g.integral();
    den = den.truncated(g.order);
    return Series<Q>(-c) * g * inverse(den);
}

std::vector<Series<Q>> reproduction(const CartanData& cd, const std::vector<Series<Q>>& u, size_t i, const Q& c) {
    const Series<Q> a = ricatti_solve(cd, u, i, c);
    std::vector<Series<Q>> out = u;
    for (size_t k = 0; k < out.size(); ++k)
        if (cd.root[i][k] != 0) out[k] -= Series<Q>(cd.root[i][k]) * a;
    return out;
}

LoopElement<Series<Q>> coordinate_change(const LoopElement<Series<Q>>& A, const Series<Q>& mu) {
    const Series<Q> dmu = mu.deriv();
    LoopElement<Series<Q>> r(A.n);
    for (const auto& [k, c] : A.terms) r.add(k, compose(c, mu) * dmu);
    return r;
}

Series<Q> transform_phi(const Series<Q>& phi, const Series<Q>& mu, long h) {
    const Series<Q> d1 = mu.deriv(), d2 = d1.deriv();
    return compose(phi, mu) * d1 + Series<Q>(Q(h)) * d2 * inverse(d1);
}

Series<Q> transform_v(const Series<Q>& v, int j, const Series<Q>& mu) { return compose(v, mu) * pow(mu.deriv(), j + 1); }

std::vector<Series<FunPoly>> symbolic_miura(const CartanData& cd, int order, int sign) {
    FockContext fc(cd);
    std::vector<Series<FunPoly>> u;
    for (size_t j = 0; j < cd.dim(); ++j) {
        std::vector<FunPoly> co(order);
        for (int p = 0; p < order; ++p) {
            const int n = -p - 1;  // u_n t^{−n−1}
            for (size_t k = 0; k < cd.dim(); ++k)
                if (fc.ginv[k][j] != 0) {
                    FunPoly x = FunPoly::var(static_cast<int>(k), n);
                    x *= fc.ginv[k][j] * Q(sign);
                    co[p] += x;
                }
        }
        u.emplace_back(co, order);
    }
    return u;
}

}  // namespace affop
