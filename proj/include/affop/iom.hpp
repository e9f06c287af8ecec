#pragma once

#include "affop/canonical.hpp"
#include "affop/linalg.hpp"

#include <string>
#include <vector>

namespace affop {

struct IomClass {
    int j = 0;
    CState rep;                    // grade j+1 in the aff subspace
    std::vector<CState> witnesses; // w_i ∈ π_{α_i}, grade j−1 (weight j), with S̄_{α_i} rep = T^(aff) w_i
    std::string tag;               // "reduced" when rep has no component along the exact image
};

// Basis of {v ∈ aff π₀ of grade j+1 : H v ∈ T^(aff)(aff π_{α_i} of weight j)} modulo T^(aff)(aff π₀ of grade j).
std::vector<IomClass> iom_density(const FockContext& fc, int j);

struct IomReport {
    std::vector<std::string> checks;  // passed identities, in order
    std::string tag;
};
// Re-checks all invariants of a class, including Aut O-covariance modulo exact terms; throws FailedInvariant.
IomReport verify_class(const FockContext& fc, const IomClass& c);

// Echelon basis of T^(aff)(aff π₀ of grade j) in the monomial basis of grade j+1.
Echelon exact_image(const FockContext& fc, int j);

}  // namespace affop
