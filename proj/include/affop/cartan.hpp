#pragma once

#include "affop/rational.hpp"

#include <string>
#include <vector>

namespace affop {

using IMat = std::vector<std::vector<long>>;

// Element of h (≅ h*) in the basis {α̌_0, …, α̌_ℓ, ρ̌}.
struct CartanVector {
    QVec c;

    CartanVector() = default;
    explicit CartanVector(size_t n) : c(n) {}
    explicit CartanVector(QVec v) : c(std::move(v)) {}
    size_t size() const { return c.size(); }
    const Q& operator[](size_t i) const { return c[i]; }
    Q& operator[](size_t i) { return c[i]; }
    bool is_zero() const {
        for (const auto& x : c)
            if (x != 0) return false;
        return true;
    }

    CartanVector& operator+=(const CartanVector& o) {
        for (size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
        return *this;
    }
    CartanVector& operator-=(const CartanVector& o) {
        for (size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
        return *this;
    }
    CartanVector& operator*=(const Q& q) {
        for (auto& x : c) x *= q;
        return *this;
    }
    friend CartanVector operator+(CartanVector a, const CartanVector& b) { return a += b; }
    friend CartanVector operator-(CartanVector a, const CartanVector& b) { return a -= b; }
    friend CartanVector operator*(const Q& q, CartanVector a) { return a *= q; }
    friend CartanVector operator-(CartanVector a) { return a *= Q(-1); }
    friend bool operator==(const CartanVector& a, const CartanVector& b) { return a.c == b.c; }
};

// Finite-type family data used for exponents and builtin matrices.
struct ExponentRule {
    char family = 0;   // 'A','B','C','D' or 0 when no rule is known
    int rank = 0;      // finite rank
    int coxeter = 0;   // h
    std::vector<int> finite;  // finite exponents (with multiplicity)
    bool known() const { return family != 0; }
};

struct CartanData {
    std::string label;
    IMat A;
    int ell = 0;  // |I| = ell + 1
    std::vector<long> marks, comarks;
    QVec eps;
    long h = 0, hv = 0;
    QMat gram;  // (ell+2)×(ell+2)

    CartanVector delta, rho, rho_check;
    std::vector<CartanVector> coroot, root, fund_coweight, fund_weight;
    ExponentRule rule;

    size_t dim() const { return static_cast<size_t>(ell) + 2; }
    size_t nodes() const { return static_cast<size_t>(ell) + 1; }
    CartanVector zero() const { return CartanVector(dim()); }
    CartanVector basis(size_t k) const {
        CartanVector v(dim());
        v[k] = 1;
        return v;
    }
    Q bilin(const CartanVector& x, const CartanVector& y) const;
    // α̃_i = α_i − δ/h.
    CartanVector root_tilde(size_t i) const;
};

IMat builtin_matrix(const std::string& label);
CartanData build_cartan(const IMat& A, const std::string& label = "");
CartanData build_cartan(const std::string& label);

// Sorted multiset E ∩ [1, N].
std::vector<int> exponents(const CartanData& cd, int N);

std::string vec_str(const CartanVector& v);

}  // namespace affop
