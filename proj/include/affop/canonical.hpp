#pragma once

#include "affop/fock.hpp"

#include <optional>
#include <vector>

namespace affop {

// Polynomials in the classes [α_j]_n, j = 1..ℓ (code index j denotes [α_j]); [α_0] is eliminated
// through Σ a_i [α_i] = 0.
using FinElement = FockElement<Q>;

// T^(aff) with ξ = −ρ̌; requires (δ, weight) = 0.
CState t_aff(const FockContext& fc, const CState& v);
// T^(aff) by direct enumeration of compositions (n_1,…,n_m) — slow reference form.
CState t_aff_enumerated(const FockContext& fc, const CState& v);

// a_{[n]}|0⟩ for n ≤ −1 (a_{[n]} acts on any π_λ with (δ,λ)=0 as multiplication by this polynomial).
CState canonical_mode_poly(const FockContext& fc, const CartanVector& a, int n);
CState canonical_mode(const FockContext& fc, const CartanVector& a, int n, const CState& v);

// Class [α_i] in the reduced generators (i may be 0).
CartanVector fin_class(const CartanData& cd, size_t i);
std::vector<Mono> fin_monomials(const CartanData& cd, int g);
CState decorate(const FockContext& fc, const FinElement& m);
// Reduced screening flow on classes: [x]_n ↦ ε_i⁻¹ (α_i, x) V_{[α_i]}[n+1].
FinElement fin_q(const FockContext& fc, size_t i, const FinElement& m);

struct AffMembership {
    bool member = false;
    FinElement coords;  // v = decorate(coords) when member
};
AffMembership membership_aff(const FockContext& fc, const CState& v);

// decorate() of every reduced monomial of grade g, in fin_monomials order.
std::vector<CState> aff_basis(const FockContext& fc, int g);

}  // namespace affop
