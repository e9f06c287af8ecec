#include "affop/cartan.hpp"

#include "affop/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <regex>

namespace affop {

namespace {

IMat finite_matrix(char fam, int n) {
    IMat C(n, std::vector<long>(n, 0));
    for (int i = 0; i < n; ++i) C[i][i] = 2;
    auto link = [&](int i, int j) { C[i][j] = C[j][i] = -1; };
    if (fam == 'D') {
        for (int i = 0; i + 1 < n - 1; ++i) link(i, i + 1);
        link(n - 3, n - 1);
    } else {
        for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
    }
    if (fam == 'B') C[n - 1][n - 2] = -2;
    if (fam == 'C') C[n - 2][n - 1] = -2;
    return C;
}

// Highest root θ and its coroot θ̌ in simple (co)root coordinates.
void highest(char fam, int n, std::vector<long>& th, std::vector<long>& thc) {
    th.assign(n, 1);
    thc.assign(n, 1);
    if (fam == 'B') {
        for (int i = 1; i < n; ++i) th[i] = 2;
        for (int i = 1; i < n - 1; ++i) thc[i] = 2;
    } else if (fam == 'C') {
        for (int i = 0; i < n - 1; ++i) th[i] = 2;
    } else if (fam == 'D') {
        for (int i = 1; i < n - 2; ++i) th[i] = thc[i] = 2;
    }
}

bool family_ok(char fam, int n) {
    switch (fam) {
        case 'A': return n >= 1;
        case 'B': return n >= 3;
        case 'C': return n >= 2;
        case 'D': return n >= 4;
        default: return false;
    }
}

IMat untwisted(char fam, int n) {
    IMat C = finite_matrix(fam, n);
    std::vector<long> th, thc;
    highest(fam, n, th, thc);
    IMat A(n + 1, std::vector<long>(n + 1, 0));
    A[0][0] = 2;
    for (int j = 0; j < n; ++j) {
        long s0 = 0, s1 = 0;
        for (int k = 0; k < n; ++k) {
            s0 += C[j][k] * th[k];
            s1 += thc[k] * C[k][j];
        }
        A[j + 1][0] = -s0;
        A[0][j + 1] = -s1;
        for (int k = 0; k < n; ++k) A[j + 1][k + 1] = C[j][k];
    }
    if (n == 1) A = {{2, -2}, {-2, 2}};
    return A;
}

ExponentRule rule_for(char fam, int n) {
    ExponentRule r;
    r.family = fam;
    r.rank = n;
    switch (fam) {
        case 'A':
            r.coxeter = n + 1;
            for (int i = 1; i <= n; ++i) r.finite.push_back(i);
            break;
        case 'B':
        case 'C':
            r.coxeter = 2 * n;
            for (int i = 1; i <= n; ++i) r.finite.push_back(2 * i - 1);
            break;
        case 'D':
            r.coxeter = 2 * n - 2;
            for (int i = 1; i <= n - 1; ++i) r.finite.push_back(2 * i - 1);
            r.finite.push_back(n - 1);
            break;
    }
    std::sort(r.finite.begin(), r.finite.end());
    return r;
}

bool same_up_to_permutation(const IMat& a, const IMat& b) {
    const size_t n = a.size();
    if (b.size() != n || n > 9) return false;
    std::vector<size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
        bool ok = true;
        for (size_t i = 0; i < n && ok; ++i)
            for (size_t j = 0; j < n && ok; ++j) ok = a[p[i]][p[j]] == b[i][j];
        if (ok) return true;
    } while (std::next_permutation(p.begin(), p.end()));
    return false;
}

// Positive coprime integer generator of a one-dimensional null space.
std::vector<long> positive_null(const QMat& m, size_t n, const char* what) {
    QMat ns = null_space(m, static_cast<int>(n));
    if (ns.size() != 1) throw Error("NotAffine", std::string(what) + ": corank is " + std::to_string(ns.size()));
    Z l = 1, g = 0;
    for (auto& x : ns[0]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    std::vector<Z> v(n);
    for (size_t i = 0; i < n; ++i) {
        v[i] = ns[0][i].get_num() * (l / ns[0][i].get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v[i].get_mpz_t());
    }
    int sign = v[0] > 0 ? 1 : -1;
    std::vector<long> out(n);
    for (size_t i = 0; i < n; ++i) {
        Z w = v[i] / g * sign;
        if (w <= 0) throw Error("NotAffine", std::string(what) + " not positive");
        out[i] = w.get_si();
    }
    return out;
}

}  // namespace

Q CartanData::bilin(const CartanVector& x, const CartanVector& y) const {
    Q s = 0;
    for (size_t i = 0; i < dim(); ++i) {
        if (x[i] == 0) continue;
        for (size_t j = 0; j < dim(); ++j)
            if (y[j] != 0 && gram[i][j] != 0) s += x[i] * gram[i][j] * y[j];
    }
    return s;
}

CartanVector CartanData::root_tilde(size_t i) const { return root[i] - frac(1, h) * delta; }

IMat builtin_matrix(const std::string& label) {
    static const std::regex re(R"(^([A-D])(\d+)\^([12])$)");
    std::smatch m;
    if (!std::regex_match(label, m, re)) throw Error("UnknownType", "unknown type label '" + label + "'");
    char fam = m[1].str()[0];
    int n = std::stoi(m[2].str());
    int tw = std::stoi(m[3].str());
    if (tw == 2) {
        if (fam == 'A' && n == 2) return {{2, -4}, {-1, 2}};
        throw Error("UnknownType", "twisted label '" + label + "' not tabulated");
    }
    if (!family_ok(fam, n)) throw Error("UnknownType", "rank out of range in '" + label + "'");
    return untwisted(fam, n);
}

CartanData build_cartan(const std::string& label) { return build_cartan(builtin_matrix(label), label); }

CartanData build_cartan(const IMat& A, const std::string& label) {
    const size_t n = A.size();
    if (n < 2) throw Error("NotAffine", "need at least two nodes");
    for (const auto& row : A)
        if (row.size() != n) throw Error("NotAffine", "matrix is not square");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (i == j && A[i][j] != 2) throw Error("NotAffine", "diagonal entry is not 2");
            if (i != j && A[i][j] > 0) throw Error("NotAffine", "positive off-diagonal entry");
            if (i != j && ((A[i][j] == 0) != (A[j][i] == 0))) throw Error("NotAffine", "zero pattern not symmetric");
        }
    {
        std::vector<char> seen(n, 0);
        std::vector<size_t> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            size_t i = stack.back();
            stack.pop_back();
            for (size_t j = 0; j < n; ++j)
                if (!seen[j] && A[i][j] != 0) { seen[j] = 1; stack.push_back(j); }
        }
        if (std::count(seen.begin(), seen.end(), 1) != static_cast<long>(n))
            throw Error("Indecomposable", "Dynkin diagram is disconnected");
    }
    QMat Aq(n, QVec(n)), At(n, QVec(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            Aq[i][j] = A[i][j];
            At[j][i] = A[i][j];
        }

    CartanData cd;
    cd.label = label;
    cd.A = A;
    cd.ell = static_cast<int>(n) - 1;
    cd.marks = positive_null(Aq, n, "marks");
    cd.comarks = positive_null(At, n, "comarks");
    cd.h = std::accumulate(cd.marks.begin(), cd.marks.end(), 0L);
    cd.hv = std::accumulate(cd.comarks.begin(), cd.comarks.end(), 0L);
    for (size_t i = 0; i < n; ++i) cd.eps.push_back(frac(cd.marks[i], cd.comarks[i]));

    const size_t d = n + 1;
    cd.gram.assign(d, QVec(d));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) cd.gram[i][j] = cd.eps[i] * A[j][i];
        cd.gram[i][n] = cd.gram[n][i] = cd.eps[i];
    }
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j)
            if (cd.gram[i][j] != cd.gram[j][i]) throw Error("NotAffine", "matrix is not symmetrizable");
    if (det(cd.gram) == 0) throw Error("NotAffine", "degenerate bilinear form");

    for (size_t i = 0; i < n; ++i) {
        cd.coroot.push_back(cd.basis(i));
        cd.root.push_back((1 / cd.eps[i]) * cd.basis(i));
    }
    cd.rho_check = cd.basis(n);
    cd.delta = cd.zero();
    for (size_t i = 0; i < n; ++i) cd.delta[i] = cd.comarks[i];

    // Linear solve for x with (x, y_k) = r_k.
    auto solve_pairings = [&](const std::vector<CartanVector>& ys, const QVec& rhs) {
        QMat M;
        for (const auto& y : ys) {
            QVec row(d);
            for (size_t a = 0; a < d; ++a)
                for (size_t b = 0; b < d; ++b) row[a] += cd.gram[a][b] * y[b];
            M.push_back(row);
        }
        auto x = solve(M, rhs, static_cast<int>(d));
        if (!x) throw Error("NotAffine", "inconsistent pairing system");
        return CartanVector(*x);
    };

    {
        QVec ones(n, Q(1));
        CartanVector r0 = solve_pairings(cd.coroot, ones);
        Q t = -cd.bilin(r0, r0) / (2 * cd.bilin(r0, cd.delta));
        cd.rho = r0 + t * cd.delta;
    }
    for (size_t i = 0; i < n; ++i) {
        std::vector<CartanVector> ys = cd.root;
        ys.push_back(cd.rho);
        QVec rhs(n + 1);
        rhs[i] = 1;
        cd.fund_coweight.push_back(solve_pairings(ys, rhs));
        std::vector<CartanVector> zs = cd.coroot;
        zs.push_back(cd.rho_check);
        cd.fund_weight.push_back(solve_pairings(zs, rhs));
    }

    static const std::regex re(R"(^([A-D])(\d+)\^1$)");
    std::smatch m;
    if (std::regex_match(label, m, re)) {
        cd.rule = rule_for(m[1].str()[0], std::stoi(m[2].str()));
        if (cd.rule.coxeter != cd.h) cd.rule = {};
    }
    if (!cd.rule.known()) {
        const int r = cd.ell;
        for (char fam : {'A', 'B', 'C', 'D'}) {
            if (!family_ok(fam, r)) continue;
            if (same_up_to_permutation(A, untwisted(fam, r))) {
                cd.rule = rule_for(fam, r);
                break;
            }
        }
    }
    return cd;
}

std::vector<int> exponents(const CartanData& cd, int N) {
    if (!cd.rule.known())
        throw Error("UnknownExponentRule", "no exponent rule for type '" + (cd.label.empty() ? std::string("matrix") : cd.label) + "'");
    std::vector<int> out;
    for (int e : cd.rule.finite)
        for (int j = e; j <= N; j += cd.rule.coxeter) out.push_back(j);
    std::sort(out.begin(), out.end());
    return out;
}

std::string vec_str(const CartanVector& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += " ";
        s += qstr(v[i]);
    }
    return s + ")";
}

}  // namespace affop
