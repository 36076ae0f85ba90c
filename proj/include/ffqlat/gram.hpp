#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "hilbert.hpp"
#include "polymat.hpp"
#include "ratfunc.hpp"

namespace ffqlat {

/// Square class of K_infinity^x: one of {1, delta, 1/t, delta/t}, encoded as
/// (valuation parity, quadratic character of the leading coefficient).
struct SquareClassAtInfinity {
    int parity = 0;    // v_infinity mod 2
    int unit_chi = 1;  // +1 square leading unit, -1 non-square

    friend SquareClassAtInfinity operator*(SquareClassAtInfinity a, SquareClassAtInfinity b) {
        return {(a.parity + b.parity) % 2, a.unit_chi * b.unit_chi};
    }
    friend bool operator==(SquareClassAtInfinity a, SquareClassAtInfinity b) {
        return a.parity == b.parity && a.unit_chi == b.unit_chi;
    }
    bool is_trivial() const { return parity == 0 && unit_chi == 1; }
};

inline SquareClassAtInfinity square_class_infinity(const RatFunc& f) {
    if (f.is_zero()) throw InputError("square class of zero");
    int d = f.deg_infinity().value();
    return {((d % 2) + 2) % 2, f.field().chi(f.lc_infinity())};
}

/// Hilbert symbol at infinity straight from square classes.
inline int hilbert_infinity_classes(SquareClassAtInfinity a, SquareClassAtInfinity b, const Fq& F) {
    int s = 1;
    int chi_m1 = F.chi(F.neg(F.one()));
    if (a.parity && b.parity) s *= chi_m1;
    if (b.parity) s *= a.unit_chi;
    if (a.parity) s *= b.unit_chi;
    return s;
}

/// A quadratic lattice (L, Q) of rank 1..4 given by its Gram matrix over A,
/// entries m_ij = (1/2) B(v_i, v_j), m_ii = Q(v_i).
class GramLattice {
   public:
    GramLattice(const Fq& F, PolyMatrix gram) : F_(&F), gram_(std::move(gram)) {
        if (gram_.rows() != gram_.cols()) throw InputError("Gram matrix must be square");
        n_ = gram_.rows();
        if (n_ < 1 || n_ > 4) throw InputError("rank must be 1..4 (definite forms force n <= 4)");
        if (!gram_.is_symmetric()) throw InputError("Gram matrix must be symmetric");
        det_ = gram_.det();
        if (det_.is_zero()) throw SingularFormError("Gram matrix is singular");
        detect_reduced_shape();
    }

    const Fq& field() const { return *F_; }
    int rank() const { return n_; }
    const PolyMatrix& gram() const { return gram_; }
    const Poly& det() const { return det_; }
    /// Whether the Gram satisfies the reduced degree conditions.
    bool reduced() const { return reduced_shape_; }
    /// Diagonal degrees; only meaningful when reduced().
    const std::vector<int>& minima() const {
        assert(reduced_shape_);
        return minima_;
    }

    /// Diagonal form over K equivalent to Q (symmetric congruence
    /// elimination with rational function entries).
    std::vector<RatFunc> diagonalize_over_K() const {
        int n = n_;
        std::vector<std::vector<RatFunc>> M(n, std::vector<RatFunc>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) M[i][j] = RatFunc(gram_(i, j));
        std::vector<RatFunc> diag;
        for (int k = 0; k < n; ++k) {
            if (M[k][k].is_zero()) {
                int l = -1;
                for (int i = k + 1; i < n; ++i)
                    if (!M[i][i].is_zero()) {
                        l = i;
                        break;
                    }
                if (l >= 0) {
                    std::swap(M[k], M[l]);
                    for (int i = 0; i < n; ++i) std::swap(M[i][k], M[i][l]);
                } else {
                    for (int i = k + 1; i < n; ++i)
                        if (!M[k][i].is_zero()) {
                            l = i;
                            break;
                        }
                    if (l < 0) throw SingularFormError("degenerate block while diagonalizing");
                    // v_k += v_l turns the (k,k) entry into 2 m_kl != 0
                    for (int i = 0; i < n; ++i) M[i][k] = M[i][k] + M[i][l];
                    for (int i = 0; i < n; ++i) M[k][i] = M[k][i] + M[l][i];
                }
            }
            for (int j = k + 1; j < n; ++j) {
                if (M[k][j].is_zero()) continue;
                RatFunc f = M[k][j] / M[k][k];
                for (int i = 0; i < n; ++i) M[i][j] = M[i][j] - f * M[i][k];
                for (int i = 0; i < n; ++i) M[j][i] = M[j][i] - f * M[k][i];
            }
            diag.push_back(M[k][k]);
        }
        return diag;
    }

   private:
    void detect_reduced_shape() {
        reduced_shape_ = true;
        for (int i = 0; i < n_ && reduced_shape_; ++i) {
            if (gram_(i, i).is_zero()) {
                reduced_shape_ = false;
                break;
            }
            for (int j = i + 1; j < n_; ++j) {
                if (!(gram_(i, i).deg() <= gram_(j, j).deg())) reduced_shape_ = false;
                if (!(gram_(i, j).deg() < gram_(i, i).deg())) reduced_shape_ = false;
            }
        }
        minima_.clear();
        if (reduced_shape_)
            for (int i = 0; i < n_; ++i) minima_.push_back(gram_(i, i).deg().value());
    }

    const Fq* F_;
    PolyMatrix gram_;
    Poly det_;
    int n_ = 0;
    bool reduced_shape_ = false;
    std::vector<int> minima_;
};

/// Anisotropy over K_infinity decided from the square classes of a
/// diagonalization (rank 1..4; 5+ is always isotropic over a local field).
inline bool anisotropic_at_infinity(const std::vector<SquareClassAtInfinity>& cls, const Fq& F) {
    int n = static_cast<int>(cls.size());
    if (n == 1) return true;
    if (n >= 5) return false;
    SquareClassAtInfinity minus1{0, F.chi(F.neg(F.one()))};
    if (n == 2) {
        SquareClassAtInfinity c = minus1 * cls[0] * cls[1];  // class of -d1*d2
        return !c.is_trivial();
    }
    int hasse = 1;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) hasse *= hilbert_infinity_classes(cls[i], cls[j], F);
    SquareClassAtInfinity d{0, 1};
    for (auto& c : cls) d = d * c;
    if (n == 3) {
        // isotropic iff hasse = (-1, -d)
        int rhs = hilbert_infinity_classes(minus1, minus1 * d, F);
        return hasse != rhs;
    }
    // n = 4: anisotropic iff d is a square and hasse != (-1,-1)
    int rhs = hilbert_infinity_classes(minus1, minus1, F);
    return d.is_trivial() && hasse != rhs;
}

/// True iff the form is anisotropic over K_infinity = F_q((1/t)).
inline bool is_definite(const GramLattice& L) {
    std::vector<SquareClassAtInfinity> cls;
    if (L.reduced()) {
        // For a Gram in reduced shape the leading principal minors have the
        // diagonal's degrees and leading coefficients, so the classes at
        // infinity are just those of the diagonal entries.
        for (int i = 0; i < L.rank(); ++i) cls.push_back(square_class_infinity(RatFunc(L.gram()(i, i))));
    } else {
        for (const RatFunc& d : L.diagonalize_over_K()) cls.push_back(square_class_infinity(d));
    }
    return anisotropic_at_infinity(cls, L.field());
}

/// Hasse symbol of the form at a place (product of pairwise Hilbert symbols
/// of a K-diagonalization).
inline int hasse_symbol(const GramLattice& L, const Place& v) {
    auto diag = L.diagonalize_over_K();
    int s = 1;
    for (size_t i = 0; i < diag.size(); ++i)
        for (size_t j = i + 1; j < diag.size(); ++j) s *= hilbert_symbol(diag[i], diag[j], v);
    return s;
}

/// Result of reduction: the reduced lattice and the unimodular change of
/// basis with gram(L_red) = U^T gram(L) U.
struct ReductionResult {
    GramLattice lattice;
    PolyMatrix U;
};

/// Djokovic-style reduction for definite lattices: sort by diagonal degree,
/// clear off-diagonal entries by polynomial division, repeat. The pass cap
/// turns a non-terminating (isotropic) input into a clean error, but
/// definiteness is decided up front by invariants, never by failure.
inline ReductionResult reduce(const GramLattice& L) {
    const Fq& F = L.field();
    if (!is_definite(L)) throw NotDefiniteError("form is isotropic over K_infinity");
    int n = L.rank();
    PolyMatrix S = L.gram();
    PolyMatrix U = PolyMatrix::identity(F, n);

    int maxdeg = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) maxdeg = std::max(maxdeg, S(i, j).deg().value_or(0));
    long long cap = 64LL * n * (maxdeg + 1) + 64;

    auto col_op = [&](int j, int i, const Poly& f) {  // v_j -= f * v_i
        for (int k = 0; k < n; ++k) S(k, j) = S(k, j) - f * S(k, i);
        for (int k = 0; k < n; ++k) S(j, k) = S(j, k) - f * S(i, k);
        for (int k = 0; k < n; ++k) U(k, j) = U(k, j) - f * U(k, i);
    };
    auto sort_key_less = [&](int a, int b) {
        const Poly &pa = S(a, a), &pb = S(b, b);
        if (pa.deg() != pb.deg()) return pa.deg() < pb.deg();
        return pa < pb;
    };
    auto apply_perm = [&](const std::vector<int>& perm) {
        PolyMatrix S2(F, n, n), U2(F, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) S2(i, j) = S(perm[i], perm[j]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) U2(i, j) = U(i, perm[j]);
        S = S2;
        U = U2;
    };
    auto is_reduced = [&]() {
        for (int i = 0; i < n; ++i) {
            if (S(i, i).is_zero()) return false;
            for (int j = i + 1; j < n; ++j) {
                if (!(S(i, i).deg() <= S(j, j).deg())) return false;
                if (!(S(i, j).deg() < S(i, i).deg())) return false;
            }
        }
        return true;
    };

    long long pass = 0;
    while (true) {
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::stable_sort(perm.begin(), perm.end(), sort_key_less);
        bool id = true;
        for (int i = 0; i < n; ++i)
            if (perm[i] != i) id = false;
        if (!id) apply_perm(perm);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (S(i, i).is_zero()) throw NotDefiniteError("zero diagonal during reduction");
                Poly f = S(i, j) / S(i, i);
                if (!f.is_zero()) col_op(j, i, f);
            }
        if (is_reduced()) break;
        if (++pass > cap) throw NotDefiniteError("reduction pass cap exceeded");
    }

    // exact congruence check on every reduction
    PolyMatrix check = U.transpose() * L.gram() * U;
    if (!(check == S)) throw Error("internal: reduction congruence violated");
    return {GramLattice(F, S), U};
}

/// Successive minima (mu_1 <= ... <= mu_n): diagonal degrees of any reduced
/// Gram; well-defined by Gerstein's theorem.
inline std::vector<int> successive_minima(const GramLattice& L) {
    if (L.reduced()) {
        if (!is_definite(L)) throw NotDefiniteError("form is isotropic over K_infinity");
        return L.minima();
    }
    return reduce(L).lattice.minima();
}

/// Adjoint lattice (L^ad, Q^ad) = (dual lattice, det * Q): Gram is the
/// adjugate with rows and columns reversed, which is again reduced for
/// reduced ternary input.
inline GramLattice adjoint(const GramLattice& L) {
    return GramLattice(L.field(), L.gram().adjugate().reversed());
}

/// det(gram) = u * monic_det with u in F_q^x; second component is the
/// square class of u (+1 square, -1 non-square).
inline std::pair<Poly, int> determinant_class(const GramLattice& L) {
    const Poly& d = L.det();
    return {d.monic(), L.field().chi(d.lc())};
}

}  // namespace ffqlat
