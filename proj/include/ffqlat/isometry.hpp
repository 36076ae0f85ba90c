#pragma once

#include <functional>
#include <optional>

#include "localdata.hpp"
#include "spectrum.hpp"

namespace ffqlat {

/// Change of basis with constant entries; by Gerstein's theorem this is the
/// only kind that can relate two reduced Gram matrices.
struct IsometryWitness {
    int n = 0;
    std::vector<FqElem> u;  // row-major n x n

    FqElem at(int i, int j) const { return u[static_cast<size_t>(i) * n + j]; }
    PolyMatrix as_poly_matrix(const Fq& F) const {
        PolyMatrix U(F, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) U(i, j) = Poly::constant(F, at(i, j));
        return U;
    }
    friend bool operator==(const IsometryWitness& a, const IsometryWitness& b) {
        return a.n == b.n && a.u == b.u;
    }
    friend bool operator<(const IsometryWitness& a, const IsometryWitness& b) {
        return a.u < b.u;  // same n in any one context
    }
};

namespace detail {

/// Shared backtracking core: find constant U with U^T S U = S', columns
/// chosen from vectors of the right value with full partial-Gram pruning.
class ConstantIsometrySearch {
   public:
    ConstantIsometrySearch(const GramLattice& S, const GramLattice& T) : S_(&S), T_(&T) {
        const Fq& F = S.field();
        n_ = S.rank();
        // all constant vectors and their values/pairings under S
        long long total = 1;
        for (int i = 0; i < n_; ++i) total *= F.q();
        vecs_.reserve(total);
        for (long long idx = 0; idx < total; ++idx) {
            std::vector<FqElem> w(n_);
            long long v = idx;
            for (int i = 0; i < n_; ++i) {
                w[i] = F.from_index(static_cast<int>(v % F.q()));
                v /= F.q();
            }
            vecs_.push_back(std::move(w));
        }
    }

    /// All columns-so-far compatible vectors for column j.
    template <typename Yield>
    void search(bool all_witnesses, Yield&& yield) {
        cols_.clear();
        search_rec(0, all_witnesses, yield);
    }

   private:
    Poly pair_value(const std::vector<FqElem>& a, const std::vector<FqElem>& b) const {
        const Fq& F = S_->field();
        Poly acc = Poly::zero(F);
        for (int i = 0; i < n_; ++i) {
            if (a[i].v == 0) continue;
            for (int j = 0; j < n_; ++j) {
                if (b[j].v == 0) continue;
                acc = acc + F.mul(a[i], b[j]) * S_->gram()(i, j);
            }
        }
        return acc;
    }

    template <typename Yield>
    bool search_rec(int j, bool all_witnesses, Yield&& yield) {
        if (j == n_) {
            IsometryWitness w;
            w.n = n_;
            w.u.resize(static_cast<size_t>(n_) * n_);
            for (int col = 0; col < n_; ++col)
                for (int row = 0; row < n_; ++row)
                    w.u[static_cast<size_t>(row) * n_ + col] = cols_[col][row];
            // exact congruence on every return path
            const Fq& F = S_->field();
            PolyMatrix U = w.as_poly_matrix(F);
            if (!(U.transpose() * S_->gram() * U == T_->gram()))
                throw Error("internal: isometry witness fails congruence");
            bool stop = yield(w);
            return !all_witnesses || stop;
        }
        for (const auto& w : vecs_) {
            if (!(pair_value(w, w) == T_->gram()(j, j))) continue;
            bool ok = true;
            for (int i = 0; i < j && ok; ++i)
                if (!(pair_value(cols_[i], w) == T_->gram()(i, j))) ok = false;
            if (!ok) continue;
            cols_.push_back(w);
            bool done = search_rec(j + 1, all_witnesses, yield);
            cols_.pop_back();
            if (done) return true;
        }
        return false;
    }

    const GramLattice *S_, *T_;
    int n_;
    std::vector<std::vector<FqElem>> vecs_;
    std::vector<std::vector<FqElem>> cols_;
};

}  // namespace detail

/// Decide equivalence over A of two definite lattices. Reduces both, fails
/// fast on minima / determinant class / genus, then searches for a constant
/// change of basis column by column (sound and complete by Gerstein).
inline std::optional<IsometryWitness> isometric(const GramLattice& L, const GramLattice& Lp) {
    if (L.rank() != Lp.rank()) return std::nullopt;
    GramLattice A = L.reduced() ? L : reduce(L).lattice;
    GramLattice B = Lp.reduced() ? Lp : reduce(Lp).lattice;
    if (!is_definite(A)) throw NotDefiniteError("isometric: first form is not definite");
    if (A.minima() != B.minima()) return std::nullopt;
    auto [d1, u1] = determinant_class(A);
    auto [d2, u2] = determinant_class(B);
    if (!(d1 == d2) || u1 != u2) return std::nullopt;
    if (!same_genus(A, B)) return std::nullopt;
    std::optional<IsometryWitness> found;
    detail::ConstantIsometrySearch search(A, B);
    search.search(false, [&](const IsometryWitness& w) {
        found = w;
        return true;
    });
    return found;
}

/// The full automorphism group {U in GL_n(F_q) : U^T S U = S} of a reduced
/// definite lattice, with the group axioms checked on the result.
inline std::vector<IsometryWitness> automorphism_group(const GramLattice& L) {
    GramLattice A = L.reduced() ? L : reduce(L).lattice;
    std::vector<IsometryWitness> out;
    detail::ConstantIsometrySearch search(A, A);
    search.search(true, [&](const IsometryWitness& w) {
        out.push_back(w);
        return false;
    });
    std::sort(out.begin(), out.end());
    // group axioms: closure under product and inverse (finite set, so
    // closure plus identity membership is enough)
    const Fq& F = A.field();
    auto mul = [&](const IsometryWitness& a, const IsometryWitness& b) {
        IsometryWitness c;
        c.n = a.n;
        c.u.assign(static_cast<size_t>(a.n) * a.n, F.zero());
        for (int i = 0; i < a.n; ++i)
            for (int k = 0; k < a.n; ++k) {
                if (a.at(i, k).v == 0) continue;
                for (int j = 0; j < a.n; ++j)
                    c.u[static_cast<size_t>(i) * a.n + j] =
                        F.add(c.u[static_cast<size_t>(i) * a.n + j], F.mul(a.at(i, k), b.at(k, j)));
            }
        return c;
    };
    for (size_t i = 0; i < out.size(); ++i)
        for (size_t j = 0; j < out.size(); ++j) {
            IsometryWitness prod = mul(out[i], out[j]);
            if (!std::binary_search(out.begin(), out.end(), prod))
                throw Error("internal: automorphism set is not closed");
        }
    return out;
}

/// Canonical reduced Gram of the equivalence class: the lexicographically
/// least U^T S U over constant U that keep the matrix reduced. Deterministic
/// representative used for deduplication in searches.
inline PolyMatrix canonical_reduced_form(const GramLattice& L) {
    GramLattice A = L.reduced() ? L : reduce(L).lattice;
    const Fq& F = A.field();
    int n = A.rank();
    const auto& mu = A.minima();

    long long total = 1;
    for (int i = 0; i < n; ++i) total *= F.q();
    std::vector<std::vector<FqElem>> vecs;
    vecs.reserve(total);
    for (long long idx = 0; idx < total; ++idx) {
        std::vector<FqElem> w(n);
        long long v = idx;
        for (int i = 0; i < n; ++i) {
            w[i] = F.from_index(static_cast<int>(v % F.q()));
            v /= F.q();
        }
        vecs.push_back(std::move(w));
    }
    auto pair_value = [&](const std::vector<FqElem>& a, const std::vector<FqElem>& b) {
        Poly acc = Poly::zero(F);
        for (int i = 0; i < n; ++i) {
            if (a[i].v == 0) continue;
            for (int j = 0; j < n; ++j) {
                if (b[j].v == 0) continue;
                acc = acc + F.mul(a[i], b[j]) * A.gram()(i, j);
            }
        }
        return acc;
    };

    // serialize new entries of column j as the tuple (m_{0j}, ..., m_{jj})
    using Tuple = std::vector<Poly>;
    std::vector<std::vector<FqElem>> cols;
    std::optional<std::vector<Tuple>> best;  // chosen tuples per level of the best full solution

    std::vector<Tuple> current;
    auto tuple_less = [](const Tuple& a, const Tuple& b) {
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] < b[i]) return true;
            if (b[i] < a[i]) return false;
        }
        return false;
    };
    auto prefix_cmp = [&](const std::vector<Tuple>& a, const std::vector<Tuple>& b, size_t upto) {
        // -1: a smaller, 0: equal, 1: a larger, comparing levels 0..upto-1
        for (size_t l = 0; l < upto; ++l) {
            if (tuple_less(a[l], b[l])) return -1;
            if (tuple_less(b[l], a[l])) return 1;
        }
        return 0;
    };

    auto invertible = [&](const std::vector<std::vector<FqElem>>& columns) {
        // Gaussian elimination over F_q
        std::vector<std::vector<FqElem>> m(n, std::vector<FqElem>(n));
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n; ++r) m[r][c] = columns[c][r];
        for (int c = 0; c < n; ++c) {
            int piv = -1;
            for (int r = c; r < n; ++r)
                if (m[r][c].v != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) return false;
            std::swap(m[c], m[piv]);
            FqElem inv = F.inv(m[c][c]);
            for (int r = c + 1; r < n; ++r) {
                if (m[r][c].v == 0) continue;
                FqElem f = F.mul(m[r][c], inv);
                for (int k = c; k < n; ++k) m[r][k] = F.sub(m[r][k], F.mul(f, m[c][k]));
            }
        }
        return true;
    };

    std::function<void(int)> rec = [&](int j) {
        if (j == n) {
            if (!invertible(cols)) return;
            if (!best || prefix_cmp(current, *best, n) < 0) best = current;
            return;
        }
        if (best && prefix_cmp(current, *best, j) > 0) return;  // prefix already worse
        // group candidates by their entry tuple
        std::map<Tuple, std::vector<const std::vector<FqElem>*>,
                 decltype(tuple_less)>
            groups(tuple_less);
        for (const auto& w : vecs) {
            Poly qv = pair_value(w, w);
            if (!(qv.deg() == mu[j])) continue;
            Tuple tup;
            bool ok = true;
            for (int i = 0; i < j && ok; ++i) {
                Poly b = pair_value(cols[i], w);
                if (!(b.deg() < mu[i])) ok = false;  // keep the result reduced
                tup.push_back(b);
            }
            if (!ok) continue;
            tup.push_back(qv);
            groups[tup].push_back(&w);
        }
        for (auto& [tup, ws] : groups) {
            // once a full solution exists, only prefixes that can still tie
            // or improve are worth exploring
            current.push_back(tup);
            if (best && prefix_cmp(current, *best, j + 1) > 0) {
                current.pop_back();
                break;  // tuples ascend; later ones are worse
            }
            for (const auto* w : ws) {
                cols.push_back(*w);
                rec(j + 1);
                cols.pop_back();
            }
            current.pop_back();
        }
    };
    rec(0);
    if (!best) throw Error("internal: no canonical form found");
    // rebuild the Gram from the winning tuples
    PolyMatrix G(F, n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i) {
            G(i, j) = (*best)[j][i];
            G(j, i) = (*best)[j][i];
        }
    return G;
}

/// Canonical serialization of the class representative (dedup key).
inline std::string canonical_form_key(const GramLattice& L) {
    PolyMatrix G = canonical_reduced_form(L);
    std::string s;
    for (int i = 0; i < G.rows(); ++i)
        for (int j = i; j < G.cols(); ++j) s += G(i, j).to_string() + ";";
    return s;
}

}  // namespace ffqlat
