#pragma once

#include <tuple>
#include <vector>

#include "poly.hpp"

namespace ffqlat {

/// Dense matrix over A = F_q[t].
class PolyMatrix {
   public:
    PolyMatrix() = default;
    PolyMatrix(const Fq& F, int rows, int cols)
        : F_(&F), rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols, Poly::zero(F)) {}

    static PolyMatrix identity(const Fq& F, int n) {
        PolyMatrix m(F, n, n);
        for (int i = 0; i < n; ++i) m(i, i) = Poly::one(F);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const Fq& field() const { return *F_; }

    Poly& operator()(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
    const Poly& operator()(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }

    friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
        assert(a.cols_ == b.rows_);
        PolyMatrix r(*a.F_, a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                if (a(i, k).is_zero()) continue;
                for (int j = 0; j < b.cols_; ++j) r(i, j) = r(i, j) + a(i, k) * b(k, j);
            }
        return r;
    }
    friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }
    friend bool operator!=(const PolyMatrix& a, const PolyMatrix& b) { return !(a == b); }

    PolyMatrix transpose() const {
        PolyMatrix r(*F_, cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    bool is_symmetric() const {
        if (rows_ != cols_) return false;
        for (int i = 0; i < rows_; ++i)
            for (int j = i + 1; j < cols_; ++j)
                if (!((*this)(i, j) == (*this)(j, i))) return false;
        return true;
    }

    /// Exact determinant by cofactor expansion (intended for n <= 4).
    Poly det() const {
        assert(rows_ == cols_);
        return det_rec(*this);
    }

    /// Adjugate: adj(M) * M = det(M) * I.
    PolyMatrix adjugate() const {
        assert(rows_ == cols_);
        int n = rows_;
        PolyMatrix r(*F_, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Poly m = minor_det(j, i);
                r(i, j) = ((i + j) % 2 == 0) ? m : -m;
            }
        return r;
    }

    /// Reverse row and column order (J M J with J the flip permutation).
    PolyMatrix reversed() const {
        PolyMatrix r(*F_, rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(rows_ - 1 - i, cols_ - 1 - j);
        return r;
    }

   private:
    static Poly det_rec(const PolyMatrix& m) {
        int n = m.rows_;
        const Fq& F = *m.F_;
        if (n == 0) return Poly::one(F);
        if (n == 1) return m(0, 0);
        Poly acc = Poly::zero(F);
        for (int j = 0; j < n; ++j) {
            if (m(0, j).is_zero()) continue;
            Poly sub = m(0, j) * m.minor_det(0, j);
            acc = (j % 2 == 0) ? acc + sub : acc - sub;
        }
        return acc;
    }

    Poly minor_det(int row, int col) const {
        int n = rows_;
        PolyMatrix s(*F_, n - 1, n - 1);
        for (int i = 0, si = 0; i < n; ++i) {
            if (i == row) continue;
            for (int j = 0, sj = 0; j < n; ++j) {
                if (j == col) continue;
                s(si, sj) = (*this)(i, j);
                ++sj;
            }
            ++si;
        }
        return det_rec(s);
    }

    const Fq* F_ = nullptr;
    int rows_ = 0, cols_ = 0;
    std::vector<Poly> e_;
};

/// Smith normal form over A: returns (D, U, V) with U*M*V = D, U and V
/// unimodular (unit determinant), D diagonal with monic entries and
/// d_i | d_{i+1}.
inline std::tuple<PolyMatrix, PolyMatrix, PolyMatrix> smith_normal_form(const PolyMatrix& M) {
    const Fq& F = M.field();
    int rows = M.rows(), cols = M.cols();
    PolyMatrix D = M;
    PolyMatrix U = PolyMatrix::identity(F, rows);
    PolyMatrix V = PolyMatrix::identity(F, cols);

    auto row_sub = [&](int i, int k, const Poly& f) {  // row_i -= f * row_k
        for (int j = 0; j < cols; ++j) D(i, j) = D(i, j) - f * D(k, j);
        for (int j = 0; j < rows; ++j) U(i, j) = U(i, j) - f * U(k, j);
    };
    auto col_sub = [&](int j, int k, const Poly& f) {  // col_j -= f * col_k
        for (int i = 0; i < rows; ++i) D(i, j) = D(i, j) - f * D(i, k);
        for (int i = 0; i < cols; ++i) V(i, j) = V(i, j) - f * V(i, k);
    };
    auto row_swap = [&](int i, int k) {
        for (int j = 0; j < cols; ++j) std::swap(D(i, j), D(k, j));
        for (int j = 0; j < rows; ++j) std::swap(U(i, j), U(k, j));
    };
    auto col_swap = [&](int j, int k) {
        for (int i = 0; i < rows; ++i) std::swap(D(i, j), D(i, k));
        for (int i = 0; i < cols; ++i) std::swap(V(i, j), V(i, k));
    };

    int n = std::min(rows, cols);
    for (int k = 0; k < n; ++k) {
        while (true) {
            // find entry of least degree in the remaining block
            int bi = -1, bj = -1;
            Degree best = Degree::neg_inf();
            for (int i = k; i < rows; ++i)
                for (int j = k; j < cols; ++j) {
                    if (D(i, j).is_zero()) continue;
                    if (bi < 0 || D(i, j).deg() < best) {
                        best = D(i, j).deg();
                        bi = i;
                        bj = j;
                    }
                }
            if (bi < 0) break;  // block is zero
            if (bi != k) row_swap(bi, k);
            if (bj != k) col_swap(bj, k);
            bool clean = true;
            for (int i = k + 1; i < rows; ++i) {
                if (D(i, k).is_zero()) continue;
                row_sub(i, k, D(i, k) / D(k, k));
                if (!D(i, k).is_zero()) clean = false;
            }
            for (int j = k + 1; j < cols; ++j) {
                if (D(k, j).is_zero()) continue;
                col_sub(j, k, D(k, j) / D(k, k));
                if (!D(k, j).is_zero()) clean = false;
            }
            if (clean) {
                bool done = true;
                for (int i = k + 1; i < rows && done; ++i)
                    if (!D(i, k).is_zero()) done = false;
                for (int j = k + 1; j < cols && done; ++j)
                    if (!D(k, j).is_zero()) done = false;
                if (done) break;
            }
        }
    }
    // enforce the divisibility chain (adjacent fixes, bubble style)
    for (int pass = 0; pass < n * n + 2; ++pass) {
        bool fixed = true;
        for (int k = 0; k + 1 < n; ++k) {
            const Poly &a = D(k, k), &b = D(k + 1, k + 1);
            if (a.is_zero() && !b.is_zero()) {
                row_swap(k, k + 1);
                col_swap(k, k + 1);
                fixed = false;
                continue;
            }
            if (a.is_zero() || b.is_zero()) continue;
            if ((b % a).is_zero()) continue;
            // gcd trick: put gcd(a, b) at position k
            col_sub(k, k + 1, -Poly::one(F));  // col_k += col_{k+1}: D(k+1,k) = b
            // now clear with euclidean steps
            while (!D(k + 1, k).is_zero()) {
                Poly q = D(k, k) / D(k + 1, k);
                row_sub(k, k + 1, q);
                if (D(k, k).is_zero()) {
                    row_swap(k, k + 1);
                    continue;
                }
                q = D(k + 1, k) / D(k, k);
                row_sub(k + 1, k, q);
            }
            // clear the (k, k+1) entry reintroduced by the column op
            if (!D(k, k + 1).is_zero()) col_sub(k + 1, k, D(k, k + 1) / D(k, k));
            fixed = false;
        }
        if (fixed) break;
    }
    // monic normalization via unit row scalings
    for (int k = 0; k < n; ++k) {
        if (D(k, k).is_zero()) continue;
        FqElem u = F.inv(D(k, k).lc());
        for (int j = 0; j < cols; ++j) D(k, j) = u * D(k, j);
        for (int j = 0; j < rows; ++j) U(k, j) = u * U(k, j);
    }
    return {D, U, V};
}

}  // namespace ffqlat
