#pragma once

#include "affop/fock.hpp"

#include <vector>

namespace affop {

// V_λ[−m], m = 0..N, as weight-zero polynomial states: Σ V_λ[−m] x^m = exp(Σ_{k>0} λ_{−k} x^k / k).
struct VCoeffs {
    CartanVector lambda;
    std::vector<CState> v;  // v[m] = V_λ[−m]
};
VCoeffs v_coeffs(const CartanVector& lambda, int N);

// S_λ on π₀^ε (result in π_λ^ε), exact in ε.
QState screening_quantum(const FockContext& fc, const CartanVector& lambda, const QState& v);
// S̄_λ = −T_λ Σ_{m≥0} V_λ[−m] Σ_k (λ,b_k) ∂/∂b_{k,−1−m}.
CState screening_classical(const FockContext& fc, const CartanVector& lambda, const CState& v);
// Q_i = −ε_i⁻¹ T_{α_i}⁻¹ S̄_{α_i}: weight-preserving derivation.
CState q_flow(const FockContext& fc, size_t i, const CState& v);
// H = ⊕_i S̄_{α_i}.
std::vector<CState> hamiltonian(const FockContext& fc, const CState& v);

enum class Subspace { Full, Aff };
// Reduced-echelon basis of the grade-n part of W = ∩ ker S̄_{α_i} (optionally inside the aff subspace).
std::vector<CState> kernel_basis(const FockContext& fc, int n, Subspace sel = Subspace::Full);

// Coordinates of states in a fixed monomial list.
QVec coords(const CState& v, const std::vector<Mono>& basis);
std::vector<Mono> all_monomials(const CartanData& cd, int g);

}  // namespace affop
