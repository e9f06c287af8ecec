#include "affop/linalg.hpp"

#include <algorithm>

namespace affop {

namespace {

std::vector<std::vector<Z>> to_integer_rows(const QMat& a, int ncols) {
    std::vector<std::vector<Z>> m;
    m.reserve(a.size());
    for (const auto& row : a) {
        Z l = 1;
        for (int j = 0; j < ncols; ++j)
            if (row[j] != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), row[j].get_den_mpz_t());
        std::vector<Z> r(ncols);
        bool nz = false;
        for (int j = 0; j < ncols; ++j) {
            if (row[j] == 0) continue;
            r[j] = row[j].get_num() * (l / row[j].get_den());
            nz = true;
        }
        if (nz) m.push_back(std::move(r));
    }
    return m;
}

}  // namespace

Echelon rref(const QMat& a, int ncols) {
    auto m = to_integer_rows(a, ncols);
    const int nrows = static_cast<int>(m.size());
    std::vector<int> piv;
    Z prev = 1;
    int r = 0;
    for (int c = 0; c < ncols && r < nrows; ++c) {
        int p = -1;
        for (int i = r; i < nrows; ++i)
            if (m[i][c] != 0) { p = i; break; }
        if (p < 0) continue;
        std::swap(m[p], m[r]);
        for (int i = r + 1; i < nrows; ++i) {
            for (int j = c + 1; j < ncols; ++j) {
                m[i][j] = m[r][c] * m[i][j] - m[i][c] * m[r][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
            }
            m[i][c] = 0;
        }
        // Rows above the pivot row keep their scale; only the trailing block is Bareiss-updated.
        prev = m[r][c];
        piv.push_back(c);
        ++r;
    }
    Echelon e;
    e.ncols = ncols;
    e.pivots = piv;
    e.rows.resize(r);
    for (int i = 0; i < r; ++i) {
        e.rows[i].resize(ncols);
        for (int j = 0; j < ncols; ++j) e.rows[i][j] = Q(m[i][j]) / Q(m[i][piv[i]]);
    }
    for (int i = r - 1; i >= 0; --i) {
        const int c = piv[i];
        for (int k = 0; k < i; ++k) {
            if (e.rows[k][c] == 0) continue;
            Q f = e.rows[k][c];
            for (int j = c; j < ncols; ++j)
                if (e.rows[i][j] != 0) e.rows[k][j] -= f * e.rows[i][j];
        }
    }
    return e;
}

QMat null_space(const QMat& a, int ncols) {
    Echelon e = rref(a, ncols);
    std::vector<char> is_piv(ncols, 0);
    for (int c : e.pivots) is_piv[c] = 1;
    QMat basis;
    for (int f = 0; f < ncols; ++f) {
        if (is_piv[f]) continue;
        QVec v(ncols);
        v[f] = 1;
        for (int i = 0; i < e.rank(); ++i) v[e.pivots[i]] = -e.rows[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<QVec> solve(const QMat& a, const QVec& b, int ncols) {
    QMat aug = a;
    for (size_t i = 0; i < aug.size(); ++i) {
        aug[i].resize(ncols + 1);
        aug[i][ncols] = b[i];
    }
    Echelon e = rref(aug, ncols + 1);
    QVec x(ncols);
    for (int i = 0; i < e.rank(); ++i) {
        if (e.pivots[i] == ncols) return std::nullopt;
        x[e.pivots[i]] = e.rows[i][ncols];
    }
    return x;
}

int rank(const QMat& a, int ncols) { return rref(a, ncols).rank(); }

Q det(const QMat& a) {
    const int n = static_cast<int>(a.size());
    QMat m = a;
    Q d = 1;
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (m[i][c] != 0) { p = i; break; }
        if (p < 0) return 0;
        if (p != c) { std::swap(m[p], m[c]); d = -d; }
        d *= m[c][c];
        for (int i = c + 1; i < n; ++i) {
            if (m[i][c] == 0) continue;
            Q f = m[i][c] / m[c][c];
            for (int j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return d;
}

QMat inverse(const QMat& a) {
    const int n = static_cast<int>(a.size());
    QMat aug(n, QVec(2 * n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug[i][j] = a[i][j];
        aug[i][n + i] = 1;
    }
    Echelon e = rref(aug, 2 * n);
    if (e.rank() < n || e.pivots[n - 1] != n - 1) throw Error("NotInvertible", "singular matrix");
    QMat inv(n, QVec(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv[i][j] = e.rows[i][n + j];
    return inv;
}

QVec reduce(const Echelon& e, QVec v) {
    for (int i = 0; i < e.rank(); ++i) {
        const Q f = v[e.pivots[i]];
        if (f == 0) continue;
        for (int j = 0; j < e.ncols; ++j)
            if (e.rows[i][j] != 0) v[j] -= f * e.rows[i][j];
    }
    return v;
}

QVec mat_vec(const QMat& a, const QVec& x) {
    QVec y(a.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j)
            if (a[i][j] != 0 && x[j] != 0) y[i] += a[i][j] * x[j];
    return y;
}

QMat transpose(const QMat& a, int ncols) {
    QMat t(ncols, QVec(a.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (int j = 0; j < ncols; ++j) t[j][i] = a[i][j];
    return t;
}

}  // namespace affop
