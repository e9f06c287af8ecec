#include "affop/iom.hpp"

#include "affop/linalg.hpp"
#include "affop/screening.hpp"

#include <map>

namespace affop {

namespace {

CState from_coords(const CartanVector& w, const std::vector<Mono>& basis, const QVec& x) {
    CState s(w);
    for (size_t k = 0; k < basis.size(); ++k) s.add(basis[k], x[k]);
    return s;
}

// Witnesses w_i ∈ aff π_{α_i} (grade j−1, conformal weight j) with T^(aff) w_i = S̄_{α_i} v, or nullopt.
std::optional<std::vector<CState>> solve_witnesses(const FockContext& fc, int j, const CState& v) {
    const CartanData& cd = *fc.cd;
    const std::vector<Mono> out = all_monomials(cd, j);
    const std::vector<CState> aff = aff_basis(fc, j - 1);
    std::vector<CState> ws;
    for (size_t i = 0; i < cd.nodes(); ++i) {
        QMat cols;
        for (const CState& b : aff) cols.push_back(coords(t_aff(fc, retag(b, cd.root[i])), out));
        auto x = solve(transpose(cols, static_cast<int>(out.size())), coords(screening_classical(fc, cd.root[i], v), out),
                       static_cast<int>(aff.size()));
        if (!x) return std::nullopt;
        CState w(cd.root[i]);
        for (size_t k = 0; k < aff.size(); ++k)
            if ((*x)[k] != 0) w += retag((*x)[k] * aff[k], cd.root[i]);
        ws.push_back(w);
    }
    return ws;
}

}  // namespace

Echelon exact_image(const FockContext& fc, int j) {
    const std::vector<Mono> out = all_monomials(*fc.cd, j + 1);
    QMat rows;
    for (const CState& b : aff_basis(fc, j)) rows.push_back(coords(t_aff(fc, b), out));
    return rref(rows, static_cast<int>(out.size()));
}

std::vector<IomClass> iom_density(const FockContext& fc, int j) {
    if (j < 1) throw Error("DomainError", "exponent must be positive");
    const CartanData& cd = *fc.cd;
    const std::vector<Mono> top = all_monomials(cd, j + 1);
    const std::vector<CState> X = aff_basis(fc, j + 1);  // unknown x
    const std::vector<CState> Y = aff_basis(fc, j - 1);  // unknowns y_i ∈ π_{α_i} (weight j), one block per node
    const size_t nx = X.size(), ny = Y.size(), nodes = cd.nodes();
    const int ncols = static_cast<int>(nx + nodes * ny);

    // rows (node, monomial of π_{α_i} at grade j): S̄_{α_i} x − T^(aff) y_i = 0
    std::map<std::pair<size_t, Mono>, QVec> rows;
    auto put = [&](size_t i, const CState& s, int col, const Q& sign) {
        for (const auto& [m, c] : s.terms) {
            auto& r = rows[{i, m}];
            if (r.empty()) r.assign(ncols, Q(0));
            r[col] += sign * c;
        }
    };
    for (size_t k = 0; k < nx; ++k)
        for (size_t i = 0; i < nodes; ++i) put(i, screening_classical(fc, cd.root[i], X[k]), static_cast<int>(k), Q(1));
    for (size_t i = 0; i < nodes; ++i)
        for (size_t k = 0; k < ny; ++k)
            put(i, t_aff(fc, retag(Y[k], cd.root[i])), static_cast<int>(nx + i * ny + k), Q(-1));
    QMat a;
    for (auto& [key, r] : rows) a.push_back(std::move(r));
    QMat ns = null_space(a, ncols);

    // project onto x, reduce modulo the exact image, echelonize in monomial order
    Echelon img = exact_image(fc, j);
    QMat rem;
    for (const QVec& z : ns) {
        CState v(cd.zero());
        for (size_t k = 0; k < nx; ++k)
            if (z[k] != 0) v += z[k] * X[k];
        QVec r = reduce(img, coords(v, top));
        bool nz = false;
        for (const Q& q : r) nz = nz || q != 0;
        if (nz) rem.push_back(std::move(r));
    }
    Echelon cls = rref(rem, static_cast<int>(top.size()));

    std::vector<IomClass> out;
    for (const QVec& row : cls.rows) {
        IomClass c;
        c.j = j;
        c.rep = from_coords(cd.zero(), top, row);
        auto w = solve_witnesses(fc, j, c.rep);
        if (!w) throw Error("FailedInvariant", "class representative has no witnesses");
        c.witnesses = std::move(*w);
        c.tag = "reduced";
        out.push_back(std::move(c));
    }
    return out;
}

IomReport verify_class(const FockContext& fc, const IomClass& c) {
    const CartanData& cd = *fc.cd;
    const CartanVector xi = -cd.rho_check;
    IomReport rep;
    auto fail = [](const std::string& what) { throw Error("FailedInvariant", what); };
    const int j = c.j;
    if (!c.rep.weight.is_zero() || !c.rep.homogeneous(j + 1)) fail("grade: representative must be homogeneous of grade j+1 in the vacuum module");
    rep.checks.push_back("grade");
    if (!membership_aff(fc, c.rep).member) fail("membership_aff: representative is outside the aff subspace");
    rep.checks.push_back("membership_aff");
    for (int k = 1; k <= j + 1; ++k)
        if (!virasoro_classical(fc, k, xi, c.rep).is_zero()) fail("primary: L_" + std::to_string(k) + " v != 0");
    if (virasoro_classical(fc, 0, xi, c.rep) != Q(j + 1) * c.rep) fail("primary: L_0 v != (j+1) v");
    rep.checks.push_back("primary");
    if (c.rep.coeff(Mono()) != 0) fail("vacuum: <0|v> != 0");
    rep.checks.push_back("vacuum");
    if (c.witnesses.size() != cd.nodes()) fail("witnesses: one witness per node required");
    for (size_t i = 0; i < cd.nodes(); ++i) {
        const CState& w = c.witnesses[i];
        if (!w.is_zero() && !(w.weight == cd.root[i])) fail("witnesses: w_i must lie in pi_{alpha_i}");
        CState lhs = screening_classical(fc, cd.root[i], c.rep);
        if (lhs != retag(t_aff(fc, retag(w, cd.root[i])), cd.root[i])) fail("H v = T^(aff) w fails at node " + std::to_string(i));
    }
    rep.checks.push_back("cocycle");
    // R(μ) v − μ'(0)^{−(j+1)} v is T^(aff)-exact (it vanishes on primaries)
    const std::vector<Mono> top = all_monomials(cd, j + 1);
    Echelon img = exact_image(fc, j);
    for (const QVec& g : {QVec{Q(2), frac(1, 3), Q(-1), frac(5, 2)}, QVec{frac(-3, 4), Q(1), Q(0), frac(2, 9)}}) {
        CoordChange mu = aut_O_decompose(g, j + 2);
        CState d = aut_O_act(fc, mu, c.rep, xi) - qpow(1 / g[0], j + 1) * c.rep;
        for (const auto& [m, q] : d.terms)
            if (grade(m) != j + 1) fail("aut_O: covariance fails outside grade j+1");
        QVec r = reduce(img, coords(d, top));
        for (const Q& q : r)
            if (q != 0) fail("aut_O: R(mu) v - v0^{-(j+1)} v is not exact");
    }
    rep.checks.push_back("aut_O");
    QVec r = reduce(img, coords(c.rep, top));
    rep.tag = r == coords(c.rep, top) ? "reduced" : "shifted";
    return rep;
}

}  // namespace affop
