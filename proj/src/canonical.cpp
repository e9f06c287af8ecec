#include "affop/canonical.hpp"

#include "affop/linalg.hpp"
#include "affop/screening.hpp"

#include <map>

namespace affop {

namespace {

void require_isotropic(const CartanData& cd, const CartanVector& w) {
    if (cd.bilin(cd.delta, w) != 0) throw Error("WeightNotIsotropic", "(delta, lambda) must vanish");
}

CartanVector minus_delta_over_h(const CartanData& cd) { return frac(-1, cd.h) * cd.delta; }

}  // namespace

CState t_aff(const FockContext& fc, const CState& v) {
    const CartanData& cd = *fc.cd;
    require_isotropic(cd, v.weight);
    const CartanVector xi = -cd.rho_check;
    const int G = v.max_grade();
    // Σ_s V_{−δ/h}[−s] L_{s−1} v
    VCoeffs V = v_coeffs(minus_delta_over_h(cd), G + 1);
    CState r(v.weight);
    for (int s = 0; s <= G + 1; ++s) {
        CState l = virasoro_classical(fc, s - 1, xi, v);
        if (l.is_zero()) continue;
        r += retag(multiply(V.v[s], l), v.weight);
    }
    return r;
}

CState t_aff_enumerated(const FockContext& fc, const CState& v) {
    const CartanData& cd = *fc.cd;
    require_isotropic(cd, v.weight);
    const CartanVector xi = -cd.rho_check;
    const int G = v.max_grade();
    const CartanVector d = cd.delta;
    CState r(v.weight);
    // compositions (n_1..n_m) with Σ n ≤ G + 1
    std::vector<int> parts;
    auto rec = [&](auto&& self, int sum) -> void {
        const int m = static_cast<int>(parts.size());
        CState l = virasoro_classical(fc, sum - 1, xi, v);
        if (!l.is_zero()) {
            Q coef = qpow(Q(-1), m) / (qpow(Q(cd.h), m) * factorial(m));
            CState pre = CState::vacuum(cd.zero());
            for (int n : parts) {
                coef /= n;
                pre = multiply(pre, mode_poly<Q>(d, -n));
            }
            CState t = retag(multiply(pre, l), v.weight);
            t *= coef;
            r += t;
        }
        for (int n = 1; sum + n <= G + 1; ++n) {
            parts.push_back(n);
            self(self, sum + n);
            parts.pop_back();
        }
    };
    rec(rec, 0);
    return r;
}

CState canonical_mode_poly(const FockContext& fc, const CartanVector& a, int n) {
    if (n > -1) throw Error("DomainError", "canonical modes are polynomial only for n <= -1");
    CState p = mode_poly<Q>(a, -1);
    for (int k = 1; k < -n; ++k) {
        p = t_aff(fc, p);
        p *= frac(1, k);
    }
    return p;
}

CState canonical_mode(const FockContext& fc, const CartanVector& a, int n, const CState& v) {
    require_isotropic(*fc.cd, v.weight);
    return multiply(canonical_mode_poly(fc, a, n), v);
}

CartanVector fin_class(const CartanData& cd, size_t i) {
    CartanVector x(cd.dim());
    if (i != 0) {
        x[i] = 1;
        return x;
    }
    for (size_t j = 1; j < cd.nodes(); ++j) x[j] = Q(-cd.marks[j]) / Q(cd.marks[0]);
    return x;
}

std::vector<Mono> fin_monomials(const CartanData& cd, int g) {
    std::vector<int> cols;
    for (int j = 1; j <= cd.ell; ++j) cols.push_back(j);
    return monomials_of_grade(cols, g);
}

namespace {

// Decorates with a local cache of canonical-mode polynomials keyed by mode code.
struct Decorator {
    const FockContext& fc;
    std::map<char16_t, CState> cache;

    const CState& mode(char16_t code) {
        auto it = cache.find(code);
        if (it != cache.end()) return it->second;
        const int j = code_index(code), n = code_mode(code);
        CState p = n == -1 ? mode_poly<Q>(fc.cd->root_tilde(j), -1) : t_aff(fc, mode(mode_code(j, n + 1)));
        if (n < -1) p *= frac(1, -n - 1);
        return cache.emplace(code, std::move(p)).first->second;
    }

    CState operator()(const FinElement& m) {
        const CartanData& cd = *fc.cd;
        CState r(cd.zero());
        for (const auto& [mono, c] : m.terms) {
            CState t = CState::vacuum(cd.zero());
            for (char16_t code : mono) {
                const int j = code_index(code);
                if (j < 1 || j > cd.ell) throw Error("DomainError", "reduced generators are indexed 1..ell");
                t = multiply(t, mode(code));
            }
            t *= c;
            r += t;
        }
        return r;
    }
};

}  // namespace

CState decorate(const FockContext& fc, const FinElement& m) {
    Decorator d{fc, {}};
    return d(m);
}

std::vector<CState> aff_basis(const FockContext& fc, int g) {
    const CartanData& cd = *fc.cd;
    Decorator d{fc, {}};
    std::vector<CState> out;
    for (const Mono& m : fin_monomials(cd, g)) out.push_back(d(FinElement::monomial(cd.zero(), m)));
    return out;
}

FinElement fin_q(const FockContext& fc, size_t i, const FinElement& m) {
    const CartanData& cd = *fc.cd;
    VCoeffs V = v_coeffs(fin_class(cd, i), m.max_grade());
    FinElement r(cd.zero());
    for (const auto& [mono, c] : m.terms) {
        for (size_t q = 0; q < mono.size(); ++q) {
            if (q > 0 && mono[q] == mono[q - 1]) continue;
            const int j = code_index(mono[q]);
            if (j < 1 || j > cd.ell) throw Error("DomainError", "reduced generators are indexed 1..ell");
            Q w = cd.bilin(cd.root[i], cd.root[j]) / cd.eps[i];
            if (w == 0) continue;
            Mono mm = mono;
            const int mult = mono_remove(mm, mono[q]);
            const int s = -code_mode(mono[q]) - 1;
            FinElement t = multiply(V.v[s], FinElement::monomial(cd.zero(), mm));
            t *= w * mult * c;
            r += t;
        }
    }
    return r;
}

AffMembership membership_aff(const FockContext& fc, const CState& v) {
    const CartanData& cd = *fc.cd;
    AffMembership res;
    res.coords = FinElement(cd.zero());
    if (!v.weight.is_zero()) return res;
    std::map<int, CState> by_grade;
    for (const auto& [m, c] : v.terms) {
        auto it = by_grade.try_emplace(grade(m), CState(cd.zero())).first;
        it->second.add(m, c);
    }
    for (const auto& [g, part] : by_grade) {
        const std::vector<Mono> basis = all_monomials(cd, g);
        const std::vector<Mono> fin = fin_monomials(cd, g);
        const std::vector<CState> gens = aff_basis(fc, g);
        QMat cols;
        for (const CState& s : gens) cols.push_back(coords(s, basis));
        QMat a = transpose(cols, static_cast<int>(basis.size()));
        auto x = solve(a, coords(part, basis), static_cast<int>(gens.size()));
        if (!x) return res;
        for (size_t k = 0; k < fin.size(); ++k) res.coords.add(fin[k], (*x)[k]);
    }
    res.member = true;
    return res;
}

}  // namespace affop
