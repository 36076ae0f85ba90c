#pragma once

#include <set>

#include "cyclotomic.hpp"
#include "isometry.hpp"

namespace ffqlat {

/// Quadratic space over F_q: symmetric n x n Gram with phi(w) = w^T M w.
class FqQuadSpace {
   public:
    FqQuadSpace(const Fq& F, std::vector<std::vector<FqElem>> m) : F_(&F), m_(std::move(m)) {
        n_ = static_cast<int>(m_.size());
        for (auto& row : m_)
            if (static_cast<int>(row.size()) != n_) throw InputError("matrix must be square");
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (!(m_[i][j] == m_[j][i])) throw InputError("matrix must be symmetric");
        analyze();
    }

    static FqQuadSpace zero(const Fq& F, int n) {
        return FqQuadSpace(F, std::vector<std::vector<FqElem>>(n, std::vector<FqElem>(n, F.zero())));
    }
    static FqQuadSpace diagonal(const Fq& F, const std::vector<FqElem>& d) {
        auto m = std::vector<std::vector<FqElem>>(d.size(), std::vector<FqElem>(d.size(), F.zero()));
        for (size_t i = 0; i < d.size(); ++i) m[i][i] = d[i];
        return FqQuadSpace(F, m);
    }

    const Fq& field() const { return *F_; }
    int dim() const { return n_; }
    int rank() const { return rank_; }
    int radical_dim() const { return n_ - rank_; }
    /// Square class (+1/-1) of det of a radical complement; +1 for rank 0.
    int regular_det_chi() const { return det_chi_; }
    const std::vector<std::vector<FqElem>>& matrix() const { return m_; }

    FqElem eval(const std::vector<FqElem>& w) const {
        FqElem acc = F_->zero();
        for (int i = 0; i < n_; ++i) {
            if (w[i].v == 0) continue;
            for (int j = 0; j < n_; ++j)
                if (w[j].v != 0) acc = F_->add(acc, F_->mul(F_->mul(w[i], w[j]), m_[i][j]));
        }
        return acc;
    }

   private:
    void analyze() {
        // symmetric Gaussian elimination over F_q (char != 2)
        auto M = m_;
        const Fq& F = *F_;
        rank_ = 0;
        FqElem det = F.one();
        for (int k = 0; k < n_; ++k) {
            if (M[k][k].v == 0) {
                int l = -1;
                for (int i = k + 1; i < n_; ++i)
                    if (M[i][i].v != 0) {
                        l = i;
                        break;
                    }
                if (l >= 0) {
                    std::swap(M[k], M[l]);
                    for (int i = 0; i < n_; ++i) std::swap(M[i][k], M[i][l]);
                } else {
                    for (int i = k + 1; i < n_ && l < 0; ++i)
                        if (M[k][i].v != 0) l = i;
                    if (l < 0) continue;  // row is in the radical
                    for (int i = 0; i < n_; ++i) M[i][k] = F.add(M[i][k], M[i][l]);
                    for (int i = 0; i < n_; ++i) M[k][i] = F.add(M[k][i], M[l][i]);
                }
            }
            if (M[k][k].v == 0) continue;
            ++rank_;
            det = F.mul(det, M[k][k]);
            for (int j = 0; j < n_; ++j) {
                if (j == k || M[k][j].v == 0) continue;
                FqElem f = F.div(M[k][j], M[k][k]);
                for (int i = 0; i < n_; ++i) M[i][j] = F.sub(M[i][j], F.mul(f, M[i][k]));
                for (int i = 0; i < n_; ++i) M[j][i] = F.sub(M[j][i], F.mul(f, M[k][i]));
            }
        }
        det_chi_ = (rank_ == 0) ? 1 : F.chi(det);
    }

    const Fq* F_;
    int n_ = 0, rank_ = 0, det_chi_ = 1;
    std::vector<std::vector<FqElem>> m_;
};

/// The quadratic Gauss sum G = sum over F_q of chi(x^2).
inline CycValue gauss_sum_G(const Fq& F) {
    CycValue g(F.p());
    for (int i = 0; i < F.q(); ++i) {
        FqElem x = F.from_index(i);
        g = g + CycValue::root(F.p(), F.trace(F.mul(x, x)));
    }
    return g;
}

/// Gamma(W, phi) by direct enumeration of all q^n vectors.
inline CycValue gauss_sum(const FqQuadSpace& W) {
    const Fq& F = W.field();
    int n = W.dim();
    long long total = 1;
    for (int i = 0; i < n; ++i) total *= F.q();
    std::vector<long long> zeta(F.p(), 0);
    std::vector<FqElem> w(n, F.zero());
    for (long long idx = 0; idx < total; ++idx) {
        long long v = idx;
        for (int i = 0; i < n; ++i) {
            w[i] = F.from_index(static_cast<int>(v % F.q()));
            v /= F.q();
        }
        zeta[F.trace(W.eval(w))] += 1;
    }
    CycValue out(F.p());
    for (int j = 0; j < F.p(); ++j)
        if (zeta[j]) out = out + zeta[j] * CycValue::root(F.p(), j);
    return out;
}

/// Closed form q^{n-r} psi(det phi_0) G^r.
inline CycValue gauss_sum_closed_form(const FqQuadSpace& W) {
    const Fq& F = W.field();
    long long scale = 1;
    for (int i = 0; i < W.radical_dim(); ++i) scale *= F.q();
    CycValue g = gauss_sum_G(F).pow(W.rank());
    if (W.regular_det_chi() < 0) g = -g;
    return scale * g;
}

/// System of quadratic forms on a common F_q^n.
struct QFSystem {
    std::vector<FqQuadSpace> forms;

    int dim() const { return forms.empty() ? 0 : forms.front().dim(); }
    int size() const { return static_cast<int>(forms.size()); }

    std::vector<FqElem> eval(const std::vector<FqElem>& w) const {
        std::vector<FqElem> out;
        out.reserve(forms.size());
        for (auto& f : forms) out.push_back(f.eval(w));
        return out;
    }
};

/// Fiber counts |Phi^{-1}(y)| for all y in F_q^m, iterating the domain once.
inline std::map<std::vector<uint16_t>, long long> fiber_counts(const QFSystem& Phi) {
    if (Phi.forms.empty()) throw InputError("empty system");
    const Fq& F = Phi.forms.front().field();
    int n = Phi.dim();
    long long total = 1;
    for (int i = 0; i < n; ++i) total *= F.q();
    std::map<std::vector<uint16_t>, long long> out;
    std::vector<FqElem> w(n, F.zero());
    for (long long idx = 0; idx < total; ++idx) {
        long long v = idx;
        for (int i = 0; i < n; ++i) {
            w[i] = F.from_index(static_cast<int>(v % F.q()));
            v /= F.q();
        }
        auto y = Phi.eval(w);
        std::vector<uint16_t> key(y.size());
        for (size_t i = 0; i < y.size(); ++i) key[i] = y[i].v;
        out[key] += 1;
    }
    return out;
}

/// Carlitz criterion: Phi and Phi' have equal fiber counts iff the Gauss
/// sums of all F_q-linear combinations agree. Walks the coefficient tuples
/// with an odometer, updating the combined matrices by single-digit deltas.
inline bool carlitz_isospectral(const QFSystem& Phi, const QFSystem& PhiP,
                                unsigned long long budget = 100000000ULL) {
    if (Phi.forms.empty() || PhiP.forms.empty()) throw InputError("empty system");
    if (Phi.dim() != PhiP.dim() || Phi.size() != PhiP.size())
        throw InputError("systems must share dimension and length");
    const Fq& F = Phi.forms.front().field();
    int n = Phi.dim(), m = Phi.size();
    unsigned long long combos = 1;
    for (int i = 0; i < m; ++i) {
        combos *= F.q();
        check_budget(combos, budget, "carlitz combination space");
    }
    unsigned long long q_to_n = 1;
    for (int i = 0; i < n; ++i) {
        q_to_n *= F.q();
        check_budget(q_to_n, budget, "carlitz domain");
    }

    auto M1 = FqQuadSpace::zero(F, n).matrix();
    auto M2 = M1;
    std::vector<int> digits(m, 0);
    auto add_scaled = [&](std::vector<std::vector<FqElem>>& M, const FqQuadSpace& f, FqElem c) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) M[i][j] = F.add(M[i][j], F.mul(c, f.matrix()[i][j]));
    };
    while (true) {
        FqQuadSpace W1(F, M1), W2(F, M2);
        // closed-form comparison: equal rank and regular determinant class
        if (W1.rank() != W2.rank() || W1.regular_det_chi() != W2.regular_det_chi()) return false;
        // odometer step
        int d = 0;
        while (d < m) {
            int old = digits[d];
            int next = (old + 1) % F.q();
            digits[d] = next;
            FqElem delta = F.sub(F.from_index(next), F.from_index(old));
            add_scaled(M1, Phi.forms[d], delta);
            add_scaled(M2, PhiP.forms[d], delta);
            if (next != 0) break;
            ++d;
        }
        if (d == m) break;
    }
    return true;
}

/// Report of the squares-proportionality law for degree-2 polynomials:
/// if F(x) and G(x) agree up to squares for every x, then F = u^2 G.
struct SquaresProportionalReport {
    bool pointwise_square_class_equal = false;
    bool proportional_by_square = false;
    bool implication_held = true;
};

inline SquaresProportionalReport verify_squares_proportional(const Poly& Fpoly, const Poly& G) {
    if (!(Fpoly.deg() == 2) || !(G.deg() == 2)) throw InputError("need degree-2 polynomials");
    const Fq& F = Fpoly.field();
    SquaresProportionalReport rep;
    rep.pointwise_square_class_equal = true;
    for (int i = 0; i < F.q(); ++i) {
        FqElem x = F.from_index(i);
        FqElem a = Fpoly.eval(x), b = G.eval(x);
        if ((a.v == 0) != (b.v == 0)) rep.pointwise_square_class_equal = false;
        if (a.v != 0 && b.v != 0 && F.chi(a) != F.chi(b)) rep.pointwise_square_class_equal = false;
    }
    rep.proportional_by_square = false;
    for (int u = 1; u < F.q(); ++u) {
        FqElem uu = F.mul(F.from_index(u), F.from_index(u));
        if (uu * G == Fpoly) {
            rep.proportional_by_square = true;
            break;
        }
    }
    rep.implication_held = !rep.pointwise_square_class_equal || rep.proportional_by_square;
    return rep;
}

/// Automorphism transitivity on constant representations: for a definite
/// binary Q0 with mu_1 = mu_2 and a value a of degree mu_1, Aut(Q0) acts
/// transitively on {(x,y) in F_q^2 : Q0(x,y) = a}.
struct BinaryTransitivityReport {
    std::vector<std::vector<FqElem>> solutions;
    long long aut_order = 0;
    bool transitive = true;  // vacuously true when there are no solutions
};

inline BinaryTransitivityReport verify_binary_transitivity(const GramLattice& Q0, const Poly& a) {
    if (Q0.rank() != 2) throw InputError("verify_binary_transitivity needs a binary lattice");
    GramLattice R = Q0.reduced() ? Q0 : reduce(Q0).lattice;
    if (R.minima()[0] != R.minima()[1]) throw InputError("needs mu_1 = mu_2");
    if (!(a.deg() == R.minima()[0])) throw InputError("value must have degree mu_1");
    const Fq& F = R.field();
    BinaryTransitivityReport rep;
    for (int xi = 0; xi < F.q(); ++xi)
        for (int yi = 0; yi < F.q(); ++yi) {
            if (xi == 0 && yi == 0) continue;
            FqElem x = F.from_index(xi), y = F.from_index(yi);
            Poly val = F.mul(x, x) * R.gram()(0, 0) +
                       (F.mul(F.two(), F.mul(x, y))) * R.gram()(0, 1) +
                       F.mul(y, y) * R.gram()(1, 1);
            if (val == a) rep.solutions.push_back({x, y});
        }
    auto aut = automorphism_group(R);
    rep.aut_order = static_cast<long long>(aut.size());
    if (rep.solutions.empty()) return rep;
    // orbit of the first solution under Aut(Q0)
    std::set<std::pair<uint16_t, uint16_t>> orbit;
    for (const auto& U : aut) {
        FqElem x = rep.solutions[0][0], y = rep.solutions[0][1];
        FqElem nx = F.add(F.mul(U.at(0, 0), x), F.mul(U.at(0, 1), y));
        FqElem ny = F.add(F.mul(U.at(1, 0), x), F.mul(U.at(1, 1), y));
        orbit.insert({nx.v, ny.v});
    }
    rep.transitive = (orbit.size() == rep.solutions.size());
    if (rep.transitive)
        for (auto& s : rep.solutions)
            if (!orbit.count({s[0].v, s[1].v})) rep.transitive = false;
    return rep;
}

}  // namespace ffqlat
