#include "affop/screening.hpp"

#include "affop/canonical.hpp"
#include "affop/linalg.hpp"

#include <map>

namespace affop {

VCoeffs v_coeffs(const CartanVector& lambda, int N) {
    VCoeffs r{lambda, {}};
    const CartanVector zero(lambda.size());
    r.v.push_back(CState::vacuum(zero));
    // m V[−m] = Σ_{k=1}^m λ_{−k} V[−(m−k)]
    for (int m = 1; m <= N; ++m) {
        CState acc(zero);
        for (int k = 1; k <= m; ++k) acc += multiply(mode_poly<Q>(lambda, -k), r.v[m - k]);
        acc *= frac(1, m);
        r.v.push_back(acc);
    }
    return r;
}

std::vector<Mono> all_monomials(const CartanData& cd, int g) {
    std::vector<int> cols;
    for (size_t j = 0; j < cd.dim(); ++j) cols.push_back(static_cast<int>(j));
    return monomials_of_grade(cols, g);
}

QVec coords(const CState& v, const std::vector<Mono>& basis) {
    QVec x(basis.size());
    std::map<Mono, size_t> idx;
    for (size_t k = 0; k < basis.size(); ++k) idx.emplace(basis[k], k);
    for (const auto& [m, c] : v.terms) {
        auto it = idx.find(m);
        if (it == idx.end()) throw Error("DomainError", "state has a monomial outside the basis");
        x[it->second] = c;
    }
    return x;
}

namespace {

void require_vacuum_weight(const CartanVector& w) {
    if (!w.is_zero()) throw Error("DomainError", "screening operators act on the vacuum module");
}

}  // namespace

QState screening_quantum(const FockContext& fc, const CartanVector& lambda, const QState& v) {
    require_vacuum_weight(v.weight);
    const int G = v.max_grade();
    // A_k v with k A_k = Σ_{n=1}^k (−λ_n) A_{k−n}
    std::vector<QState> A{v};
    for (int k = 1; k <= G + 1; ++k) {
        QState acc(v.weight);
        for (int n = 1; n <= k; ++n) acc -= apply_mode(fc, lambda, n, A[k - n]);
        acc *= EpsScalar(frac(1, k));
        A.push_back(acc);
    }
    VCoeffs V = v_coeffs(lambda, G);
    QState r(lambda);
    for (int m = 0; m <= G; ++m) {
        if (A[m + 1].is_zero()) continue;
        r += retag(multiply(lift(V.v[m]), A[m + 1]), lambda);
    }
    return r;
}

CState screening_classical(const FockContext& fc, const CartanVector& lambda, const CState& v) {
    require_vacuum_weight(v.weight);
    const CartanData& cd = *fc.cd;
    VCoeffs V = v_coeffs(lambda, v.max_grade());
    std::vector<Q> w(cd.dim());
    for (size_t k = 0; k < cd.dim(); ++k) w[k] = fc.pair_basis(lambda, k);
    CState r(lambda);
    for (const auto& [m, c] : v.terms) {
        for (size_t q = 0; q < m.size(); ++q) {
            if (q > 0 && m[q] == m[q - 1]) continue;
            const int k = code_index(m[q]);
            if (w[k] == 0) continue;
            Mono mm = m;
            const int mult = mono_remove(mm, m[q]);
            const int s = -code_mode(m[q]) - 1;
            CState t = multiply(V.v[s], CState::monomial(cd.zero(), mm));
            t *= -w[k] * mult * c;
            r += retag(t, lambda);
        }
    }
    return r;
}

CState q_flow(const FockContext& fc, size_t i, const CState& v) {
    const CartanData& cd = *fc.cd;
    CState r = retag(screening_classical(fc, cd.root[i], v), v.weight);
    r *= -1 / cd.eps[i];
    return r;
}

std::vector<CState> hamiltonian(const FockContext& fc, const CState& v) {
    std::vector<CState> r;
    for (size_t i = 0; i < fc.cd->nodes(); ++i) r.push_back(screening_classical(fc, fc.cd->root[i], v));
    return r;
}

std::vector<CState> kernel_basis(const FockContext& fc, int n, Subspace sel) {
    const CartanData& cd = *fc.cd;
    const std::vector<Mono> basis = all_monomials(cd, n);
    std::vector<CState> gens;
    if (sel == Subspace::Full) {
        for (const Mono& m : basis) gens.push_back(CState::monomial(cd.zero(), m));
    } else {
        gens = aff_basis(fc, n);
    }
    // rows: (node, output monomial); columns: generators
    const int ncols = static_cast<int>(gens.size());
    std::map<std::pair<size_t, Mono>, QVec> rows;
    for (int col = 0; col < ncols; ++col) {
        std::vector<CState> h = hamiltonian(fc, gens[col]);
        for (size_t i = 0; i < h.size(); ++i)
            for (const auto& [m, c] : h[i].terms) {
                auto& row = rows[{i, m}];
                if (row.empty()) row.assign(ncols, Q(0));
                row[col] = c;
            }
    }
    QMat a;
    for (auto& [k, row] : rows) a.push_back(std::move(row));
    QMat ns = null_space(a, ncols);
    QMat vecs;
    for (const QVec& x : ns) {
        CState s(cd.zero());
        for (int col = 0; col < ncols; ++col)
            if (x[col] != 0) s += x[col] * gens[col];
        vecs.push_back(coords(s, basis));
    }
    Echelon e = rref(vecs, static_cast<int>(basis.size()));
    std::vector<CState> out;
    for (const QVec& row : e.rows) {
        CState s(cd.zero());
        for (size_t k = 0; k < basis.size(); ++k)
            if (row[k] != 0) s.add(basis[k], row[k]);
        out.push_back(s);
    }
    return out;
}

}  // namespace affop
