#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <thread>
#include <unordered_map>
#include <vector>

#include "gram.hpp"

namespace ffqlat {

/// Representation numbers of a definite lattice, complete up to `bound`:
/// counts[a] = R(L,Q,a) for every a with deg a <= bound and R > 0, and the
/// dimension sequence dim_{F_q} L_k for k = 0..bound.
struct Spectrum {
    int bound = -1;
    std::map<Poly, long long> counts;
    std::vector<long long> dims;

    long long count_of(const Poly& a) const {
        auto it = counts.find(a);
        return it == counts.end() ? 0 : it->second;
    }
    friend bool operator==(const Spectrum& a, const Spectrum& b) {
        return a.bound == b.bound && a.counts == b.counts;
    }
};

/// Content hash of a lattice (FNV-1a over field config and Gram entries),
/// the disk-cache key for spectra.
inline uint64_t gram_content_hash(const GramLattice& L) {
    uint64_t h = 1469598103934665603ULL;
    auto mix = [&](uint64_t x) {
        h ^= x;
        h *= 1099511628211ULL;
    };
    const Fq& F = L.field();
    mix(static_cast<uint64_t>(F.p()));
    mix(static_cast<uint64_t>(F.e()));
    for (int c : F.modulus()) mix(static_cast<uint64_t>(c));
    mix(static_cast<uint64_t>(L.rank()));
    for (int i = 0; i < L.rank(); ++i)
        for (int j = 0; j < L.rank(); ++j) {
            const Poly& f = L.gram()(i, j);
            mix(0xabcdULL);
            for (auto c : f.coeffs()) mix(c.v);
        }
    return h;
}

namespace detail {

struct SpectrumAccumulator {
    // fast path: coefficients packed 5 bits each into a uint64
    bool packed;
    std::unordered_map<uint64_t, long long> fast;
    std::map<std::vector<uint16_t>, long long> slow;

    explicit SpectrumAccumulator(bool use_packed) : packed(use_packed) {}
    void add(const std::vector<uint16_t>& coeffs, long long w) {
        if (packed) {
            uint64_t key = 0;
            for (size_t i = 0; i < coeffs.size(); ++i) key |= static_cast<uint64_t>(coeffs[i]) << (5 * i);
            fast[key] += w;
        } else {
            slow[coeffs] += w;
        }
    }
    void merge(const SpectrumAccumulator& other) {
        for (auto& [k, v] : other.fast) fast[k] += v;
        for (auto& [k, v] : other.slow) slow[k] += v;
    }
};

/// One enumeration task: coordinates >= level, with the value accumulated so
/// far and the "no nonzero coordinate chosen yet" flag (for the +-v pairing).
struct SpectrumKernel {
    const Fq* F;
    int n;
    int m;
    // per-level candidate data
    std::vector<std::vector<std::vector<uint16_t>>> cand;   // [level][k] coeffs of x
    std::vector<std::vector<std::vector<uint16_t>>> sq;     // m_ii * x^2 (size m+1)
    std::vector<std::vector<bool>> positive;                // first nonzero coeff in the lower half
    std::vector<std::vector<std::vector<uint16_t>>> twog;   // [level i][j<i]: 2*m_ij coeffs

    void add_scaled(std::vector<uint16_t>& acc, const std::vector<uint16_t>& f, uint16_t s,
                    int shift) const {
        if (s == 0) return;
        const uint16_t* mul = F->mul_table();
        const uint16_t* add = F->add_table();
        int q = F->q();
        for (size_t i = 0; i < f.size(); ++i) {
            if (f[i] == 0) continue;
            uint16_t prod = mul[static_cast<size_t>(s) * q + f[i]];
            size_t idx = i + shift;
            acc[idx] = add[static_cast<size_t>(acc[idx]) * q + prod];
        }
    }

    void add_into(std::vector<uint16_t>& acc, const std::vector<uint16_t>& f) const {
        const uint16_t* add = F->add_table();
        int q = F->q();
        for (size_t i = 0; i < f.size(); ++i)
            if (f[i]) acc[i] = add[static_cast<size_t>(acc[i]) * q + f[i]];
    }

    // lin = sum_{j<level} (2 m_{j,level}) * x_j, sized m+1
    std::vector<uint16_t> linear_form(int level, const std::vector<const std::vector<uint16_t>*>& xs) const {
        std::vector<uint16_t> lin(m + 1, 0);
        const uint16_t* mul = F->mul_table();
        const uint16_t* add = F->add_table();
        int q = F->q();
        for (int j = 0; j < level; ++j) {
            const auto& g = twog[level][j];
            const auto& x = *xs[j];
            for (size_t a = 0; a < g.size(); ++a) {
                if (!g[a]) continue;
                for (size_t b = 0; b < x.size(); ++b) {
                    if (!x[b]) continue;
                    size_t idx = a + b;
                    lin[idx] = add[static_cast<size_t>(lin[idx]) * q +
                                   mul[static_cast<size_t>(g[a]) * q + x[b]]];
                }
            }
        }
        return lin;
    }

    template <typename Acc>
    void recurse(int level, std::vector<const std::vector<uint16_t>*>& xs,
                 const std::vector<uint16_t>& val, bool all_zero, Acc& acc) const {
        if (level == n) {
            acc.add(val, all_zero ? 1 : 2);
            return;
        }
        std::vector<uint16_t> lin = linear_form(level, xs);
        bool lin_zero = true;
        for (auto c : lin)
            if (c) lin_zero = false;
        const auto& cands = cand[level];
        for (size_t k = 0; k < cands.size(); ++k) {
            const auto& x = cands[k];
            bool xz = true;
            for (auto c : x)
                if (c) xz = false;
            if (all_zero && !xz && !positive[level][k]) continue;
            std::vector<uint16_t> nv = val;
            add_into(nv, sq[level][k]);
            if (!lin_zero && !xz) {
                // nv += lin * x
                const uint16_t* mul = F->mul_table();
                const uint16_t* add = F->add_table();
                int q = F->q();
                for (size_t a = 0; a < lin.size(); ++a) {
                    if (!lin[a]) continue;
                    for (size_t b = 0; b < x.size(); ++b) {
                        if (!x[b]) continue;
                        size_t idx = a + b;
                        nv[idx] = add[static_cast<size_t>(nv[idx]) * q +
                                      mul[static_cast<size_t>(lin[a]) * q + x[b]]];
                    }
                }
            }
            xs.push_back(&x);
            recurse(level + 1, xs, nv, all_zero && xz, acc);
            xs.pop_back();
        }
    }
};

/// Build the enumeration tables for all lattice vectors with
/// deg Q(w) <= m (per-coordinate boxes deg x_i <= floor((m - mu_i)/2)).
inline SpectrumKernel make_value_kernel(const GramLattice& L, int m, unsigned long long budget) {
    if (!L.reduced()) throw InputError("value enumeration needs a reduced lattice");
    const Fq& F = L.field();
    int n = L.rank();
    const auto& mu = L.minima();

    SpectrumKernel K;
    K.F = &F;
    K.n = n;
    K.m = std::max(m, 0);

    unsigned long long total = 1;
    for (int i = 0; i < n; ++i) {
        int b = (m >= mu[i]) ? (m - mu[i]) / 2 : -1;
        unsigned long long cnt = 1;
        for (int k = 0; k <= b; ++k) {
            cnt *= F.q();
            check_budget(cnt, budget, "value enumeration");
        }
        total *= cnt;
        check_budget(total, budget, "value enumeration");
    }

    K.cand.resize(n);
    K.sq.resize(n);
    K.positive.resize(n);
    K.twog.resize(n);
    for (int i = 0; i < n; ++i) {
        int b = (m >= mu[i]) ? (m - mu[i]) / 2 : -1;
        long long cnt = 1;
        for (int k = 0; k <= b; ++k) cnt *= F.q();
        for (long long idx = 0; idx < cnt; ++idx) {
            std::vector<uint16_t> x(std::max(b + 1, 1), 0);
            long long v = idx;
            for (int k = 0; k <= b; ++k) {
                x[k] = static_cast<uint16_t>(v % F.q());
                v /= F.q();
            }
            bool pos = false;
            for (int k = 0; k <= b; ++k)
                if (x[k]) {
                    pos = x[k] < F.neg(FqElem{x[k]}).v;
                    break;
                }
            // m_ii * x^2
            Poly xp(F, [&] {
                std::vector<FqElem> c;
                for (auto cv : x) c.push_back(FqElem{cv});
                return c;
            }());
            Poly sqv = L.gram()(i, i) * xp * xp;
            std::vector<uint16_t> sq(K.m + 1, 0);
            for (int d = 0; d <= sqv.deg().value_or(-1); ++d) {
                if (d > K.m) throw Error("internal: lattice value exceeded bound");
                sq[d] = sqv.coeff(d).v;
            }
            K.cand[i].push_back(std::move(x));
            K.sq[i].push_back(std::move(sq));
            K.positive[i].push_back(pos);
        }
        K.twog[i].resize(i);
        for (int j = 0; j < i; ++j) {
            Poly g = F.two() * L.gram()(j, i);
            std::vector<uint16_t> gc(g.deg().value_or(-1) + 1, 0);
            for (int d = 0; d <= g.deg().value_or(-1); ++d) gc[d] = g.coeff(d).v;
            K.twog[i][j] = std::move(gc);
        }
    }
    return K;
}

/// Run a kernel over every vector, one +-v orbit at a time; Acc needs
/// add(coeffs, weight) and merge(other).
template <typename Acc, typename Factory>
inline Acc run_kernel(const SpectrumKernel& K, int jobs, Factory make_acc) {
    Acc acc = make_acc();
    int threads = std::max(1, jobs);
    if (threads > 1 && K.cand[0].size() >= 4 && K.n > 1) {
        std::vector<Acc> parts;
        for (int i = 0; i < threads; ++i) parts.push_back(make_acc());
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        for (int tIdx = 0; tIdx < threads; ++tIdx) {
            pool.emplace_back([&, tIdx]() {
                while (true) {
                    size_t k = next.fetch_add(1);
                    if (k >= K.cand[0].size()) break;
                    const auto& x = K.cand[0][k];
                    bool xz = true;
                    for (auto c : x)
                        if (c) xz = false;
                    if (!xz && !K.positive[0][k]) continue;
                    std::vector<const std::vector<uint16_t>*> xs{&x};
                    std::vector<uint16_t> val = K.sq[0][k];
                    K.recurse(1, xs, val, xz, parts[tIdx]);
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& p : parts) acc.merge(p);
    } else {
        std::vector<const std::vector<uint16_t>*> xs;
        std::vector<uint16_t> val(K.m + 1, 0);
        K.recurse(0, xs, val, true, acc);
    }
    return acc;
}

}  // namespace detail

/// Exact representation numbers R(L,Q,a) for all deg a <= m, via enumeration
/// over coefficient boxes deg x_i <= floor((m - mu_i)/2). Exploits the v/-v
/// pairing: the zero vector counts once, every other orbit contributes 2.
inline Spectrum enumerate_spectrum(const GramLattice& L, int m,
                                   unsigned long long budget = 200000000ULL, int jobs = 1) {
    const Fq& F = L.field();
    detail::SpectrumKernel K = detail::make_value_kernel(L, m, budget);
    bool packable = F.q() < 32 && K.m + 1 <= 12;
    auto acc = detail::run_kernel<detail::SpectrumAccumulator>(
        K, jobs, [&] { return detail::SpectrumAccumulator(packable); });

    Spectrum S;
    S.bound = m;
    auto emit = [&](const std::vector<uint16_t>& coeffs, long long cnt) {
        std::vector<FqElem> c;
        for (auto v : coeffs) c.push_back(FqElem{v});
        Poly a(F, c);
        if (a.deg() > m) throw Error("internal: spectrum value above bound");
        S.counts[a] += cnt;
    };
    if (packable) {
        for (auto& [key, cnt] : acc.fast) {
            std::vector<uint16_t> coeffs(K.m + 1);
            for (int i = 0; i <= K.m; ++i) coeffs[i] = static_cast<uint16_t>((key >> (5 * i)) & 31);
            emit(coeffs, cnt);
        }
    } else {
        for (auto& [key, cnt] : acc.slow) emit(key, cnt);
    }

    // dims from the counts: sum over deg a <= k must be an exact power of q
    S.dims.assign(std::max(m + 1, 0), 0);
    std::vector<long long> by_deg(std::max(m + 1, 0), 0);
    long long zero_cnt = 0;
    for (auto& [a, cnt] : S.counts) {
        if (a.is_zero())
            zero_cnt = cnt;
        else
            by_deg[a.deg().value()] += cnt;
    }
    if (zero_cnt != 1) throw Error("internal: R(0) != 1 for a definite form");
    long long acc_cnt = 1;
    for (int k = 0; k <= m; ++k) {
        acc_cnt += by_deg[k];
        long long v = acc_cnt;
        long long dim = 0;
        while (v > 1 && v % F.q() == 0) {
            v /= F.q();
            ++dim;
        }
        if (v != 1) throw Error("internal: layer size is not a power of q");
        S.dims[k] = dim;
    }
    return S;
}

/// dim L_m for m = 0..bound from the closed-form series
/// (sum_i u^{mu_i}) / ((1-u^2)(1-u)).
inline std::vector<long long> closed_form_dims(const std::vector<int>& minima, int bound) {
    std::vector<long long> num(std::max(bound + 1, 0), 0);
    for (int mu : minima)
        if (mu >= 0 && mu <= bound) num[mu] += 1;
    // denominator (1-u^2)(1-u) = 1 - u - u^2 + u^3
    std::vector<long long> a(std::max(bound + 1, 0), 0);
    for (int k = 0; k <= bound; ++k) {
        long long v = num[k];
        if (k >= 1) v += a[k - 1];
        if (k >= 2) v += a[k - 2];
        if (k >= 3) v -= a[k - 3];
        a[k] = v;
    }
    return a;
}

/// Layer dimensions dim(L_m / L_{m-1}) from (sum_i u^{mu_i}) / (1-u^2).
inline std::vector<long long> closed_form_layer_dims(const std::vector<int>& minima, int bound) {
    std::vector<long long> num(std::max(bound + 1, 0), 0);
    for (int mu : minima)
        if (mu >= 0 && mu <= bound) num[mu] += 1;
    std::vector<long long> a(std::max(bound + 1, 0), 0);
    for (int k = 0; k <= bound; ++k) {
        long long v = num[k];
        if (k >= 2) v += a[k - 2];
        a[k] = v;
    }
    return a;
}

/// Recover the successive minima from a spectrum by peeling the dimension
/// sequence: the first index with a surplus is the next minimum.
inline std::vector<int> minima_from_spectrum(const Spectrum& S, int rank) {
    std::vector<long long> rem = S.dims;
    std::vector<int> mu;
    for (int r = 0; r < rank; ++r) {
        int found = -1;
        for (int k = 0; k <= S.bound; ++k)
            if (rem[k] > 0) {
                found = k;
                break;
            }
        if (found < 0)
            throw InsufficientBoundError("spectrum bound too small to see all minima");
        mu.push_back(found);
        for (int k = found; k <= S.bound; ++k) rem[k] -= (k - found) / 2 + 1;
    }
    for (int k = 0; k <= S.bound; ++k)
        if (rem[k] != 0)
            throw InsufficientBoundError("dimension sequence does not match any minima tuple");
    return mu;
}

inline bool isospectral_up_to(const GramLattice& L, const GramLattice& Lp, int m,
                              unsigned long long budget = 200000000ULL, int jobs = 1) {
    Spectrum a = enumerate_spectrum(L, m, budget, jobs);
    Spectrum b = enumerate_spectrum(Lp, m, budget, jobs);
    return a.counts == b.counts;
}

}  // namespace ffqlat
