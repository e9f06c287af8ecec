#pragma once

#include "affop/fock.hpp"
#include "affop/poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace affop {

// h*-valued rational function χ(z) = Σ_i Σ_k χ_{i,k}/(z − x_i)^{k+1}; χ_{i,k} ∈ h* given through the form on h.
struct ChiSection {
    std::vector<Q> points;
    std::vector<std::vector<CartanVector>> coeffs;  // coeffs[i][k] = χ_{i,k}
};

// Throws ConstraintViolated unless points are distinct and Σ_i χ_{i,0} = −2ρ̌.
bool chi_validate(const CartanData& cd, const ChiSection& c);
// ⟨χ(z), a⟩.
RatFunc chi_pair(const CartanData& cd, const ChiSection& c, const CartanVector& a);
// φ(z) = ⟨χ(z), δ⟩.
RatFunc chi_phi(const CartanData& cd, const ChiSection& c);
// Uniformly random valid χ with the given points and pole orders ≤ maxk.
template <class Rng>
ChiSection random_chi(const CartanData& cd, const std::vector<Q>& points, int maxk, Rng& rng);

// Section of Π ⊗ Ω^j in the z-trivialization: Σ (monomial state) · f(z).
struct GlobalSection {
    int j = 0;
    std::map<Mono, RatFunc> terms;

    void add(const Mono& m, const RatFunc& f);
    void add(const CState& v, const RatFunc& f);
    bool is_zero() const { return terms.empty(); }
    friend bool operator==(const GlobalSection& a, const GlobalSection& b) { return a.j == b.j && a.terms == b.terms; }
};

// Substitutes b_{k,−n} ↦ ⟨χ^{(n)}(z), b_k⟩, χ^{(n)} = ∂^{n−1}χ/(n−1)!.
RatFunc f_chi(const CartanData& cd, const CState& v, const ChiSection& c);
RatFunc f_chi(const CartanData& cd, const GlobalSection& s, const ChiSection& c);

// σ ↦ σ' + (L_{−1} − jδ_{−1}/h − α T^aff)σ, weight j+1.
GlobalSection nabla_aff(const FockContext& fc, const GlobalSection& s, const Q& alpha = Q(0));
// f ↦ f' − (j/h)φ f.
RatFunc nabla_aff_chi(const CartanData& cd, const RatFunc& f, int j, const ChiSection& c);
RatFunc nabla_aff_chi(const RatFunc& f, int j, const RatFunc& phi, long h);

// Local data at each marked point: Laurent coefficients of the h*-valued χ_i, keyed by exponent.
struct LocalChi {
    std::vector<std::map<int, CartanVector>> at;  // at[i][e] = coefficient of (z − x_i)^e
};
// Expansion of a global χ to exponents < order.
LocalChi local_data(const CartanData& cd, const ChiSection& c, int order);
// Σ_i res_{x_i} ⟨χ_i, a⟩ f dz; f must vanish at ∞ and have poles only at marked points.
Q coinvariant_pair(const CartanData& cd, const CartanVector& a, const RatFunc& f, const ChiSection& c, const LocalChi& loc);

// Solvability of d = G' − (j/h)φ G with G rational, poles only at marked points.
struct CohomologyResult {
    bool equal = false;
    RatFunc witness;
    int unknowns = 0, equations = 0;  // size of the (possibly unsatisfiable) linear system
};
CohomologyResult cohomology_equal(const RatFunc& f, const RatFunc& g, const RatFunc& phi, int j, long h,
                                  const std::vector<Q>& points);

// Central extension bracket on h ⊗ K: elements a_{−1}|0⟩ f dz + |0⟩ g dz.
struct HeisSection {
    CartanVector a;
    RatFunc f, central;
};
HeisSection heis_bracket(const CartanData& cd, const HeisSection& x, const HeisSection& y, const Q& eps);
// Equality modulo exact differentials |0⟩ dF.
bool heis_equal(const HeisSection& x, const HeisSection& y, const std::vector<Q>& points);

struct FcReport {
    int j = 0;
    RatFunc from_density;  // F_χ(v_j)
    RatFunc from_oper;     // quasi-canonical v_j(z)
    Q kappa;               // from_oper ≡ κ·from_density
    CohomologyResult coh;
    bool equal = false;
};
// Compares the evaluated density class with the quasi-canonical coefficient (first component) of d + (p_{−1} − χ)dz.
// If kappa is given it is used, otherwise it is solved for jointly with the witness.
FcReport fc_compare(const FockContext& fc, int j, const ChiSection& c, std::optional<Q> kappa = std::nullopt);

template <class Rng>
ChiSection random_chi(const CartanData& cd, const std::vector<Q>& points, int maxk, Rng& rng) {
    auto rq = [&] { return frac(static_cast<long>(rng() % 9) - 4, static_cast<long>(rng() % 3) + 1); };
    ChiSection c;
    c.points = points;
    CartanVector sum = cd.zero();
    for (size_t i = 0; i < points.size(); ++i) {
        const int K = static_cast<int>(rng() % static_cast<unsigned>(maxk + 1));
        std::vector<CartanVector> row;
        for (int k = 0; k <= K; ++k) {
            CartanVector v = cd.zero();
            for (size_t d = 0; d < v.size(); ++d) v[d] = rq();
            row.push_back(v);
        }
        if (i + 1 < points.size()) sum = sum + row[0];
        c.coeffs.push_back(row);
    }
    c.coeffs.back()[0] = Q(-2) * cd.rho_check - sum;
    return c;
}

}  // namespace affop
