#pragma once

#include "affop/rational.hpp"

#include <optional>
#include <vector>

namespace affop {

// Reduced row echelon form; rows beyond rank are dropped.
struct Echelon {
    QMat rows;
    std::vector<int> pivots;  // pivot column of each row
    int ncols = 0;
    int rank() const { return static_cast<int>(rows.size()); }
};

// Fraction-free (Bareiss) elimination on the integer-scaled matrix, then rational back substitution.
Echelon rref(const QMat& a, int ncols);

// Basis of {x : a x = 0}; vector k has a 1 in the k-th free column and 0 in the other free columns.
QMat null_space(const QMat& a, int ncols);

// Some solution of a x = b (free variables set to zero), or nullopt when inconsistent.
std::optional<QVec> solve(const QMat& a, const QVec& b, int ncols);

int rank(const QMat& a, int ncols);
Q det(const QMat& a);
QMat inverse(const QMat& a);

// Reduce v against an echelon basis (clears v at every pivot column).
QVec reduce(const Echelon& e, QVec v);

QVec mat_vec(const QMat& a, const QVec& x);
QMat transpose(const QMat& a, int ncols);

}  // namespace affop
