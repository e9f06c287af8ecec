#include "affop/global.hpp"

#include "affop/canonical.hpp"
#include "affop/iom.hpp"
#include "affop/linalg.hpp"
#include "affop/oper.hpp"

#include <algorithm>

namespace affop {

namespace {

// Coefficients of f at a for exponents e < upto.
std::map<int, Q> laurent_map(const RatFunc& f, const Q& a, int upto) {
    std::map<int, Q> out;
    if (f.is_zero()) return out;
    const int low = -std::max(f.pole_order(a), 0);
    if (upto <= low) return out;
    auto [e, c] = f.laurent(a, upto - low);
    for (size_t k = 0; k < c.size(); ++k)
        if (c[k] != 0 && e + static_cast<int>(k) < upto) out[e + static_cast<int>(k)] = c[k];
    return out;
}

Poly poly_lcm(const Poly& a, const Poly& b) { return divmod(a * b, gcd(a, b)).first; }

// Lowest-degree description of the unknowns G = Σ c_b basis_b.
std::vector<RatFunc> ansatz(const RatFunc& d, const RatFunc& phi, int j, long h, const std::vector<Q>& points) {
    std::vector<RatFunc> basis;
    for (const Q& x : points) {
        int m = std::max(d.pole_order(x) - 1, 0);
        if (!phi.is_zero() && phi.pole_order(x) == 1) {
            const Q res = -Q(j) * phi.residue(x) / Q(h);
            if (res > 0 && res.get_den() == 1) m = std::max(m, static_cast<int>(res.get_num().get_si()));
        }
        for (int k = 1; k <= m; ++k) basis.push_back(RatFunc::pole(x, k));
    }
    int deg = d.is_zero() ? -1 : d.degree_at_infinity() + 1;
    if (!phi.is_zero() && phi.degree_at_infinity() == -1) {
        const RatFunc zphi = RatFunc::z() * phi;
        // lim z φ(z)
        const Q inf = zphi.num.lead() / zphi.den.lead();
        const Q res = Q(j) * inf / Q(h);
        if (res >= 0 && res.get_den() == 1) deg = std::max(deg, static_cast<int>(res.get_num().get_si()));
    }
    for (int k = 0; k <= deg; ++k) {
        QVec c(k + 1);
        c[k] = 1;
        basis.push_back(RatFunc(Poly(c)));
    }
    return basis;
}

// Solves target = Σ x_b cols_b exactly; nullopt if inconsistent.
std::optional<QVec> solve_rational(const RatFunc& target, const std::vector<RatFunc>& cols, int* eqs) {
    Poly L = target.den;
    for (const auto& c : cols) L = poly_lcm(L, c.den);
    auto numer = [&](const RatFunc& f) { return f.num * divmod(L, f.den).first; };
    std::vector<Poly> nc;
    int rows = 0;
    for (const auto& c : cols) {
        nc.push_back(numer(c));
        rows = std::max(rows, nc.back().degree() + 1);
    }
    const Poly nt = numer(target);
    rows = std::max(rows, nt.degree() + 1);
    if (eqs) *eqs = rows;
    QMat M(rows, QVec(cols.size()));
    QVec rhs(rows);
    for (size_t b = 0; b < nc.size(); ++b)
        for (int r = 0; r < rows; ++r) M[r][b] = nc[b].coeff(r);
    for (int r = 0; r < rows; ++r) rhs[r] = nt.coeff(r);
    if (cols.empty()) {
        if (nt.is_zero()) return QVec();
        return std::nullopt;
    }
    return solve(M, rhs, static_cast<int>(cols.size()));
}

bool poles_within(const RatFunc& f, const std::vector<Q>& points) {
    int total = 0;
    for (const Q& x : points) total += std::max(f.pole_order(x), 0);
    return total == f.den.degree();
}

}  // namespace

bool chi_validate(const CartanData& cd, const ChiSection& c) {
    if (c.points.empty() || c.points.size() != c.coeffs.size())
        throw Error("ConstraintViolated", "need one coefficient list per marked point, N >= 1");
    for (size_t i = 0; i < c.points.size(); ++i) {
        if (c.coeffs[i].empty()) throw Error("ConstraintViolated", "empty coefficient list at point " + std::to_string(i));
        for (size_t k = 0; k < i; ++k)
            if (c.points[i] == c.points[k]) throw Error("ConstraintViolated", "marked points coincide");
        for (const auto& v : c.coeffs[i])
            if (v.size() != cd.dim()) throw Error("ConstraintViolated", "coefficient has the wrong dimension");
    }
    CartanVector defect = Q(2) * cd.rho_check;
    for (const auto& row : c.coeffs) defect = defect + row[0];
    if (!defect.is_zero()) throw Error("ConstraintViolated", "sum of leading coefficients misses -2 rho_check by " + vec_str(defect));
    return true;
}

RatFunc chi_pair(const CartanData& cd, const ChiSection& c, const CartanVector& a) {
    RatFunc r;
    for (size_t i = 0; i < c.points.size(); ++i)
        for (size_t k = 0; k < c.coeffs[i].size(); ++k) {
            const Q w = cd.bilin(c.coeffs[i][k], a);
            if (w != 0) r += RatFunc(w) * RatFunc::pole(c.points[i], static_cast<int>(k) + 1);
        }
    return r;
}

RatFunc chi_phi(const CartanData& cd, const ChiSection& c) { return chi_pair(cd, c, cd.delta); }

void GlobalSection::add(const Mono& m, const RatFunc& f) {
    if (f.is_zero()) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
        terms.emplace(m, f);
        return;
    }
    it->second += f;
    if (it->second.is_zero()) terms.erase(it);
}

void GlobalSection::add(const CState& v, const RatFunc& f) {
    for (const auto& [m, c] : v.terms) add(m, RatFunc(c) * f);
}

namespace {

// n(z) / Π (z − x_i)^{e_i}; products and sums avoid polynomial gcds.
struct PoleFunc {
    Poly num;
    std::vector<int> e;
};

PoleFunc to_pole(const RatFunc& f, const std::vector<Q>& points) {
    PoleFunc p{f.num, std::vector<int>(points.size())};
    int total = 0;
    for (size_t i = 0; i < points.size(); ++i) total += p.e[i] = std::max(f.pole_order(points[i]), 0);
    if (total != f.den.degree()) throw Error("DomainError", "pole away from the marked points");
    return p;
}

PoleFunc mul(const PoleFunc& a, const PoleFunc& b) {
    PoleFunc r{a.num * b.num, a.e};
    for (size_t i = 0; i < r.e.size(); ++i) r.e[i] += b.e[i];
    return r;
}

void add_to(PoleFunc& a, const PoleFunc& b, const std::vector<Q>& points) {
    if (b.num.is_zero()) return;
    if (a.num.is_zero()) {
        a = b;
        return;
    }
    Poly fa(Q(1)), fb(Q(1));
    for (size_t i = 0; i < points.size(); ++i) {
        const int m = std::max(a.e[i], b.e[i]);
        if (m > a.e[i]) fa = fa * Poly::linear_power(points[i], m - a.e[i]);
        if (m > b.e[i]) fb = fb * Poly::linear_power(points[i], m - b.e[i]);
        a.e[i] = m;
    }
    a.num = a.num * fa + b.num * fb;
}

RatFunc to_ratfunc(PoleFunc p, const std::vector<Q>& points) {
    if (p.num.is_zero()) return RatFunc();
    Poly den(Q(1));
    for (size_t i = 0; i < points.size(); ++i) {
        while (p.e[i] > 0 && p.num.eval(points[i]) == 0) {
            p.num = divmod(p.num, Poly::linear_power(points[i], 1)).first;
            --p.e[i];
        }
        den = den * Poly::linear_power(points[i], p.e[i]);
    }
    return RatFunc::from_coprime(p.num, den);
}

struct ModeTable {
    const CartanData& cd;
    const ChiSection& c;
    std::map<char16_t, PoleFunc> cache;

    const PoleFunc& get(char16_t code) {
        auto it = cache.find(code);
        if (it != cache.end()) return it->second;
        const int n = -code_mode(code);
        RatFunc f = chi_pair(cd, c, cd.basis(static_cast<size_t>(code_index(code))));
        Q fact = 1;
        for (int k = 1; k < n; ++k) {
            f = f.deriv();
            fact *= Q(k);
        }
        return cache.emplace(code, to_pole(RatFunc(Q(1) / fact) * f, c.points)).first->second;
    }
    PoleFunc eval(const Mono& m) {
        PoleFunc r{Poly(Q(1)), std::vector<int>(c.points.size())};
        for (char16_t code : m) r = mul(r, get(code));
        return r;
    }
};

}  // namespace

RatFunc f_chi(const CartanData& cd, const CState& v, const ChiSection& c) {
    ModeTable t{cd, c, {}};
    PoleFunc r{Poly(), std::vector<int>(c.points.size())};
    for (const auto& [m, q] : v.terms) {
        PoleFunc x = t.eval(m);
        x.num = x.num * Poly(q);
        add_to(r, x, c.points);
    }
    return to_ratfunc(r, c.points);
}

RatFunc f_chi(const CartanData& cd, const GlobalSection& s, const ChiSection& c) {
    ModeTable t{cd, c, {}};
    PoleFunc r{Poly(), std::vector<int>(c.points.size())};
    for (const auto& [m, f] : s.terms) add_to(r, mul(t.eval(m), to_pole(f, c.points)), c.points);
    return to_ratfunc(r, c.points);
}

GlobalSection nabla_aff(const FockContext& fc, const GlobalSection& s, const Q& alpha) {
    const CartanData& cd = *fc.cd;
    GlobalSection out;
    out.j = s.j + 1;
    const CState d1 = mode_poly<Q>(cd.delta, -1);
    const Q shift = Q(-s.j) / Q(cd.h);
    for (const auto& [m, f] : s.terms) {
        const CState v = CState::monomial(cd.zero(), m);
        out.add(m, f.deriv());
        CState w = translate(v);
        CState dv = multiply(d1, v);
        dv *= shift;
        w += dv;
        if (alpha != 0) {
            CState ta = t_aff(fc, v);
            ta *= -alpha;
            w += ta;
        }
        out.add(w, f);
    }
    return out;
}

RatFunc nabla_aff_chi(const RatFunc& f, int j, const RatFunc& phi, long h) {
    return f.deriv() - RatFunc(Q(j) / Q(h)) * phi * f;
}

RatFunc nabla_aff_chi(const CartanData& cd, const RatFunc& f, int j, const ChiSection& c) {
    return nabla_aff_chi(f, j, chi_phi(cd, c), cd.h);
}

LocalChi local_data(const CartanData& cd, const ChiSection& c, int order) {
    LocalChi loc;
    for (size_t i = 0; i < c.points.size(); ++i) {
        std::map<int, CartanVector> at;
        for (size_t p = 0; p < c.points.size(); ++p)
            for (size_t k = 0; k < c.coeffs[p].size(); ++k) {
                const auto lm = laurent_map(RatFunc::pole(c.points[p], static_cast<int>(k) + 1), c.points[i], order);
                for (const auto& [e, q] : lm) {
                    auto it = at.emplace(e, cd.zero()).first;
                    it->second = it->second + q * c.coeffs[p][k];
                }
            }
        loc.at.push_back(at);
    }
    return loc;
}

Q coinvariant_pair(const CartanData& cd, const CartanVector& a, const RatFunc& f, const ChiSection& c, const LocalChi& loc) {
    if (f.is_zero()) return Q(0);
    if (f.degree_at_infinity() >= 0) throw Error("DomainError", "test function must vanish at infinity");
    if (!poles_within(f, c.points)) throw Error("DomainError", "test function has poles away from the marked points");
    Q total = 0;
    for (size_t i = 0; i < c.points.size(); ++i) {
        // res (Σ_e χ_e w^e)(Σ_m f_m w^m) = Σ_e χ_e f_{−1−e}
        if (loc.at[i].empty()) continue;
        const int pole = std::max(f.pole_order(c.points[i]), 0);
        const auto fl = laurent_map(f, c.points[i], -loc.at[i].begin()->first);
        for (const auto& [m, fm] : fl) {
            const int e = -1 - m;
            auto it = loc.at[i].find(e);
            if (it != loc.at[i].end()) total += fm * cd.bilin(it->second, a);
        }
        if (loc.at[i].rbegin()->first < pole - 1)
            throw Error("DomainError", "local data too short for the test function");
    }
    return total;
}

CohomologyResult cohomology_equal(const RatFunc& f, const RatFunc& g, const RatFunc& phi, int j, long h,
                                  const std::vector<Q>& points) {
    CohomologyResult res;
    const RatFunc d = f - g;
    if (d.is_zero()) {
        res.equal = true;
        return res;
    }
    if (!poles_within(d, points)) return res;
    const auto basis = ansatz(d, phi, j, h, points);
    std::vector<RatFunc> cols;
    for (const auto& b : basis) cols.push_back(nabla_aff_chi(b, j, phi, h));
    res.unknowns = static_cast<int>(cols.size());
    auto x = solve_rational(d, cols, &res.equations);
    if (!x) return res;
    for (size_t b = 0; b < basis.size(); ++b)
        if ((*x)[b] != 0) res.witness += RatFunc((*x)[b]) * basis[b];
    res.equal = nabla_aff_chi(res.witness, j, phi, h) == d;
    return res;
}

HeisSection heis_bracket(const CartanData& cd, const HeisSection& x, const HeisSection& y, const Q& eps) {
    HeisSection r;
    r.a = cd.zero();
    const Q w = eps * cd.bilin(x.a, y.a);
    if (w != 0 && !x.f.is_zero() && !y.f.is_zero()) r.central = RatFunc(w) * x.f * y.f.deriv();
    return r;
}

bool heis_equal(const HeisSection& x, const HeisSection& y, const std::vector<Q>& points) {
    if (!(x.f == y.f) || (!x.f.is_zero() && !(x.a == y.a))) return false;
    const RatFunc d = x.central - y.central;
    if (d.is_zero()) return true;
    if (!poles_within(d, points)) return false;
    for (const Q& p : points)
        if (d.residue(p) != 0) return false;
    return true;
}

FcReport fc_compare(const FockContext& fc, int j, const ChiSection& c, std::optional<Q> kappa) {
    const CartanData& cd = *fc.cd;
    chi_validate(cd, c);
    const auto classes = iom_density(fc, j);
    if (classes.empty()) throw Error("DomainError", std::to_string(j) + " is not an exponent");
    FcReport rep;
    rep.j = j;
    rep.from_density = f_chi(cd, classes.front().rep, c);
    // Miura data u = −χ on the h basis
    std::vector<RatFunc> u(cd.dim());
    for (size_t i = 0; i < c.points.size(); ++i)
        for (size_t k = 0; k < c.coeffs[i].size(); ++k)
            for (size_t d = 0; d < cd.dim(); ++d)
                if (c.coeffs[i][k][d] != 0) u[d] -= RatFunc(c.coeffs[i][k][d]) * RatFunc::pole(c.points[i], static_cast<int>(k) + 1);
    const auto qc = quasi_canonical(cd, miura_connection(cd, u), j);
    auto it = qc.v.find(j);
    if (it == qc.v.end() || it->second.empty()) throw Error("DomainError", "oper has no component at grade " + std::to_string(j));
    rep.from_oper = it->second.front();
    const RatFunc phi = qc.phi;
    if (kappa) {
        rep.kappa = *kappa;
        rep.coh = cohomology_equal(rep.from_oper, RatFunc(*kappa) * rep.from_density, phi, j, cd.h, c.points);
        rep.equal = rep.coh.equal;
        return rep;
    }
    // from_oper = κ F + G' − (j/h)φG, solved jointly
    const RatFunc d = rep.from_oper;
    auto basis = ansatz(d, phi, j, cd.h, c.points);
    const auto extra = ansatz(rep.from_density, phi, j, cd.h, c.points);
    for (const auto& b : extra)
        if (std::find(basis.begin(), basis.end(), b) == basis.end()) basis.push_back(b);
    std::vector<RatFunc> cols{rep.from_density};
    for (const auto& b : basis) cols.push_back(nabla_aff_chi(b, j, phi, cd.h));
    rep.coh.unknowns = static_cast<int>(cols.size());
    auto x = solve_rational(d, cols, &rep.coh.equations);
    if (!x || (*x)[0] == 0) return rep;
    rep.kappa = (*x)[0];
    for (size_t b = 0; b < basis.size(); ++b)
        if ((*x)[b + 1] != 0) rep.coh.witness += RatFunc((*x)[b + 1]) * basis[b];
    rep.coh.equal = nabla_aff_chi(rep.coh.witness, j, phi, cd.h) == d - RatFunc(rep.kappa) * rep.from_density;
    rep.equal = rep.coh.equal;
    return rep;
}

}  // namespace affop
