#pragma once

#include <optional>
#include <vector>

#include "cyclotomic.hpp"
#include "factor.hpp"
#include "gram.hpp"
#include "hilbert.hpp"
#include "polymat.hpp"

namespace ffqlat {

/// Canonical additive character chi_pi of K_pi: trivial exactly on A_pi,
/// evaluated through the residue theorem. The pi-part g/pi^k of f has poles
/// only at pi and infinity, so the trace of its residue at a root of pi is
/// the t^{-1} coefficient of its expansion at infinity.
inline CycValue chi_pi(const RatFunc& f, const Place& place) {
    if (place.is_infinity()) throw InputError("chi_pi needs a finite place");
    const Fq& F = f.field();
    int p = F.p();
    if (f.is_zero()) return CycValue::integer(p, 1);
    const Poly& pi = place.pi();
    // split the denominator into pi^k times a coprime part
    Poly den = f.den();
    int k = 0;
    while (true) {
        auto [q, r] = den.divmod(pi);
        if (!r.is_zero()) break;
        den = q;
        ++k;
    }
    if (k == 0) return CycValue::integer(p, 1);  // f is pi-integral
    // absorb the coprime denominator with a modular inverse mod pi^k
    Poly pik = Poly::one(F);
    for (int i = 0; i < k; ++i) pik = pik * pi;
    Poly g = (f.num() % pik) * poly_invmod(den % pik, pik) % pik;
    if (g.is_zero()) return CycValue::integer(p, 1);
    LaurentSeries s = RatFunc(g, pik).expand_at_infinity(-2);
    FqElem c = s.coeff(-1);
    return CycValue::root(p, F.trace(c));
}

/// Fast evaluator for chi_pi(g / pi^k) with g reduced mod pi^k: the t^{-1}
/// coefficient of g/pi^k is a fixed linear form in the coefficients of g.
class ChiPikFast {
   public:
    ChiPikFast(const Fq& F, const Poly& pi, int k) : F_(&F), k_(k) {
        pik_ = Poly::one(F);
        for (int i = 0; i < k; ++i) pik_ = pik_ * pi;
        int dk = pik_.deg().value();
        w_.assign(std::max(dk, 0), 0);
        if (k > 0) {
            LaurentSeries inv = laurent_invert(LaurentSeries::from_poly(pik_), -dk - 2);
            for (int j = 0; j < dk; ++j) w_[j] = inv.coeff(-1 - j).v;
        }
    }

    const Poly& modulus() const { return pik_; }

    /// Exponent e with chi = zeta_p^e, for a value val (reduced mod pi^k here).
    int exponent(const Poly& val) const {
        if (k_ == 0) return 0;
        Poly g = val % pik_;
        const uint16_t* mul = F_->mul_table();
        const uint16_t* add = F_->add_table();
        int q = F_->q();
        uint16_t acc = 0;
        for (int j = 0; j <= g.deg().value_or(-1); ++j) {
            uint16_t gj = g.coeff(j).v;
            if (!gj || !w_[j]) continue;
            acc = add[static_cast<size_t>(acc) * q + mul[static_cast<size_t>(gj) * q + w_[j]]];
        }
        return F_->trace(FqElem{acc});
    }

   private:
    const Fq* F_;
    int k_;
    Poly pik_;
    std::vector<uint16_t> w_;
};

/// One pi-modular Jordan component: scale nu, rank m, and the square class
/// (+1/-1) of the determinant of its unimodular part in the residue field.
struct JordanComponent {
    int nu = 0;
    int rank = 0;
    int det_chi = 1;
    friend bool operator==(const JordanComponent& a, const JordanComponent& b) {
        return a.nu == b.nu && a.rank == b.rank && a.det_chi == b.det_chi;
    }
};

struct JordanSymbol {
    Place place;
    std::vector<JordanComponent> components;  // nu strictly increasing
    friend bool operator==(const JordanSymbol& a, const JordanSymbol& b) {
        return a.components == b.components;
    }
};

/// Jordan decomposition at a finite place: symmetric elimination over the
/// localization (fractions with pi-coprime denominators), pivots of minimal
/// valuation with diagonal preference; the char != 2 row addition handles
/// off-diagonal minima.
inline JordanSymbol jordan_decompose(const GramLattice& L, const Place& place) {
    if (place.is_infinity()) throw InputError("jordan_decompose needs a finite place");
    const Poly& pi = place.pi();
    const Fq& F = L.field();
    int n = L.rank();
    std::vector<std::vector<RatFunc>> M(n, std::vector<RatFunc>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M[i][j] = RatFunc(L.gram()(i, j));

    std::vector<RatFunc> diag;
    for (int k = 0; k < n; ++k) {
        // locate the minimal-valuation entry, preferring the diagonal
        int bi = -1, bj = -1, bv = 0;
        bool have = false, have_diag = false;
        for (int i = k; i < n; ++i)
            for (int j = k; j < n; ++j) {
                if (M[i][j].is_zero()) continue;
                int v = M[i][j].valuation(pi);
                bool d = (i == j);
                if (!have || v < bv || (v == bv && d && !have_diag)) {
                    if (have && v == bv && !d && have_diag) continue;
                    bi = i;
                    bj = j;
                    bv = v;
                    have = true;
                    have_diag = d;
                }
            }
        if (!have) throw SingularFormError("zero block in Jordan decomposition");
        if (bi != bj) {
            // v_bi += v_bj makes the diagonal entry attain the minimum
            int i = bi, j = bj;
            for (int r = 0; r < n; ++r) M[r][i] = M[r][i] + M[r][j];
            for (int r = 0; r < n; ++r) M[i][r] = M[i][r] + M[j][r];
            bi = bj = i;
        }
        if (bi != k) {
            std::swap(M[bi], M[k]);
            for (int r = 0; r < n; ++r) std::swap(M[r][bi], M[r][k]);
        }
        for (int j = k + 1; j < n; ++j) {
            if (M[k][j].is_zero()) continue;
            RatFunc f = M[k][j] / M[k][k];
            for (int r = 0; r < n; ++r) M[r][j] = M[r][j] - f * M[r][k];
            for (int r = 0; r < n; ++r) M[j][r] = M[j][r] - f * M[k][r];
        }
        diag.push_back(M[k][k]);
    }

    // group by scale
    std::map<int, std::pair<int, RatFunc>> groups;  // nu -> (rank, unit product)
    for (const RatFunc& d : diag) {
        auto [v, u] = d.split_at(pi);
        auto it = groups.find(v);
        if (it == groups.end())
            groups.emplace(v, std::make_pair(1, u));
        else {
            it->second.first += 1;
            it->second.second = it->second.second * u;
        }
    }
    JordanSymbol sym{place, {}};
    for (auto& [nu, ru] : groups) {
        JordanComponent c;
        c.nu = nu;
        c.rank = ru.first;
        c.det_chi = residue_chi(ru.second, place);
        sym.components.push_back(c);
    }
    // invariants
    int total = 0, vdet = 0;
    for (auto& c : sym.components) {
        total += c.rank;
        vdet += c.nu * c.rank;
    }
    if (total != n || vdet != poly_valuation(L.det(), pi))
        throw Error("internal: Jordan symbol fails its checks");
    return sym;
}

/// mu(L, pi^{-k} Q, chi_pi): exact average of chi over the finite quotient
/// L / {x : S x = 0 mod pi^k}, computed via Smith normal forms, never via
/// the Jordan decomposition (the audibility experiment compares the two).
inline ScaledCycValue mu_average(const GramLattice& L, const Place& place, int k,
                                 unsigned long long budget = 100000000ULL) {
    if (place.is_infinity()) throw InputError("mu_average needs a finite place");
    if (k < 0) throw InputError("mu_average needs k >= 0");
    const Fq& F = L.field();
    const Poly& pi = place.pi();
    int n = L.rank(), d = place.degree(), p = F.p();
    if (k == 0) return {CycValue::integer(p, 1), 0, F.q()};

    auto [DS, US, VS] = smith_normal_form(L.gram());
    PolyMatrix C(F, n, n);
    std::vector<int> eprime(n);
    for (int i = 0; i < n; ++i) {
        int v = poly_valuation(DS(i, i), pi);
        eprime[i] = std::max(0, k - v);
        Poly pe = Poly::one(F);
        for (int j = 0; j < eprime[i]; ++j) pe = pe * pi;
        for (int r = 0; r < n; ++r) C(r, i) = VS(r, i) * pe;
    }
    auto [DC, UC, VC] = smith_normal_form(C);
    std::vector<int> e(n);
    long long logq_size = 0;
    for (int i = 0; i < n; ++i) {
        e[i] = DC(i, i).is_zero() ? 0 : poly_valuation(DC(i, i), pi);
        // invariant factors of this kernel are pi powers
        Poly pe = Poly::one(F);
        for (int j = 0; j < e[i]; ++j) pe = pe * pi;
        if (!(DC(i, i) == pe)) throw Error("internal: kernel invariant factor is not a pi power");
        logq_size += static_cast<long long>(e[i]) * d;
    }
    unsigned long long size = 1;
    for (long long i = 0; i < logq_size; ++i) {
        size *= F.q();
        check_budget(size, budget, "mu_average quotient");
    }

    // w-basis: columns of UC^{-1}; Gram there is W^T S W
    Poly du = UC.det();
    if (!(du.deg() == 0)) throw Error("internal: SNF transform not unimodular");
    PolyMatrix W = UC.adjugate();
    FqElem s = F.inv(du.lc());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) W(i, j) = s * W(i, j);
    PolyMatrix SW = W.transpose() * L.gram() * W;

    ChiPikFast chi(F, pi, k);
    const Poly& pik = chi.modulus();
    // reduce the Gram mod pi^k once
    std::vector<std::vector<Poly>> G(n, std::vector<Poly>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G[i][j] = SW(i, j) % pik;

    // enumerate tuples x_i mod pi^{e_i} recursively with partial values
    std::vector<long long> zeta_counts(p, 0);
    std::vector<std::vector<Poly>> reps(n);
    for (int i = 0; i < n; ++i) {
        long long cnt = 1;
        for (int j = 0; j < e[i] * d; ++j) cnt *= F.q();
        reps[i].reserve(cnt);
        for (long long idx = 0; idx < cnt; ++idx) {
            std::vector<FqElem> c(std::max(e[i] * d, 1), F.zero());
            long long v = idx;
            for (int j = 0; j < e[i] * d; ++j) {
                c[j] = F.from_index(static_cast<int>(v % F.q()));
                v /= F.q();
            }
            reps[i].push_back(Poly(F, c));
        }
    }
    std::vector<const Poly*> chosen(n, nullptr);
    auto rec = [&](auto&& self, int level, const Poly& acc) -> void {
        if (level == n) {
            zeta_counts[chi.exponent(acc)] += 1;
            return;
        }
        for (const Poly& x : reps[level]) {
            chosen[level] = &x;
            // acc + G[l][l] x^2 + 2 x * sum_{j<l} G[j][l] x_j, all mod pi^k
            Poly val = acc + G[level][level] * x * x;
            Poly lin = Poly::zero(F);
            for (int j = 0; j < level; ++j) lin = lin + G[j][level] * *chosen[j];
            val = (val + F.two() * lin * x) % pik;
            self(self, level + 1, val);
        }
    };
    rec(rec, 0, Poly::zero(F));

    CycValue sum(p);
    for (int j = 0; j < p; ++j)
        if (zeta_counts[j]) sum = sum + zeta_counts[j] * CycValue::root(p, j);
    return {sum, static_cast<int>(2 * logq_size), F.q()};
}

/// mu computed from a spectrum (the stabilizing limit over L_m): exact,
/// used as the audibility cross-check.
template <typename SpectrumT>
inline ScaledCycValue mu_from_spectrum(const SpectrumT& S, const GramLattice& L,
                                       const Place& place, int k) {
    const Fq& F = L.field();
    int p = F.p();
    Poly pik = Poly::one(F);
    for (int i = 0; i < k; ++i) pik = pik * place.pi();
    CycValue sum(p);
    for (auto& [a, cnt] : S.counts) {
        CycValue c = chi_pi(RatFunc(a, pik), place);
        sum = sum + cnt * c;
    }
    return {sum, 2 * static_cast<int>(S.dims.empty() ? 0 : S.dims.back()), F.q()};
}

/// Weil index gamma_v of a nondegenerate diagonal form, multiplicative over
/// orthogonal summands. Rank-one values come from the normalized Gauss sum
/// over N/M, M the maximal lattice with character-integral values and N its
/// dual; unimodular (even-valuation) classes give 1.
inline ScaledCycValue weil_gamma(const std::vector<RatFunc>& diag, const Place& v) {
    const Fq* Fp = nullptr;
    for (auto& c : diag) {
        if (c.is_zero()) throw SingularFormError("weil_gamma of a degenerate form");
        Fp = &c.field();
    }
    if (!Fp) throw InputError("weil_gamma of an empty form");
    const Fq& F = *Fp;
    int p = F.p();
    ScaledCycValue out{CycValue::integer(p, 1), 0, F.q()};
    for (const RatFunc& c : diag) {
        if (v.is_infinity()) {
            int deg = c.deg_infinity().value();
            if (((deg % 2) + 2) % 2 == 0) continue;
            // reps x0 * t^{m+1}: sum of e{c x0^2 t^{2m+2}} = Gauss sum of <lc c>
            FqElem u = c.lc_infinity();
            CycValue sum(p);
            for (int x0 = 0; x0 < F.q(); ++x0) {
                FqElem x = F.from_index(x0);
                sum = sum + CycValue::root(p, F.trace(F.mul(u, F.mul(x, x))));
            }
            out = out * ScaledCycValue{sum, 1, F.q()};
        } else {
            auto [val, unit] = c.split_at(v.pi());
            if (((val % 2) + 2) % 2 == 0) continue;
            // sum over r mod pi of chi_pi(u r^2 / pi)
            const Poly& pi = v.pi();
            int d = v.degree();
            CycValue sum(p);
            long long cnt = 1;
            for (int i = 0; i < d; ++i) cnt *= F.q();
            for (long long idx = 0; idx < cnt; ++idx) {
                std::vector<FqElem> co(d);
                long long w = idx;
                for (int i = 0; i < d; ++i) {
                    co[i] = F.from_index(static_cast<int>(w % F.q()));
                    w /= F.q();
                }
                Poly r(F, co);
                RatFunc arg = unit * RatFunc(r * r, pi);
                sum = sum + chi_pi(arg, v);
            }
            out = out * ScaledCycValue{sum, d, F.q()};
        }
    }
    return out;
}

inline ScaledCycValue weil_gamma(const GramLattice& L, const Place& v) {
    return weil_gamma(L.diagonalize_over_K(), v);
}

/// Genus comparison: equal determinant classes, equal Jordan symbols at
/// every prime dividing the determinant, and matching invariants at
/// infinity (definiteness, Hasse symbol, determinant square class).
inline bool same_genus(const GramLattice& L, const GramLattice& Lp) {
    if (L.rank() != Lp.rank()) throw InputError("same_genus: rank mismatch");
    auto [d1, u1] = determinant_class(L);
    auto [d2, u2] = determinant_class(Lp);
    if (!(d1 == d2) || u1 != u2) return false;
    for (auto& [pi, mult] : factor(d1).factors) {
        Place v = Place::finite(pi);
        if (!(jordan_decompose(L, v) == jordan_decompose(Lp, v))) return false;
    }
    if (is_definite(L) != is_definite(Lp)) return false;
    Place inf = Place::infinity(L.field());
    if (hasse_symbol(L, inf) != hasse_symbol(Lp, inf)) return false;
    if (!(square_class_infinity(RatFunc(L.det())) == square_class_infinity(RatFunc(Lp.det()))))
        return false;
    return true;
}

/// Serialized genus invariants (for bucketing keys).
inline std::string genus_key(const GramLattice& L) {
    std::string s;
    auto [d, u] = determinant_class(L);
    s += "det:" + d.to_string() + ";u:" + std::to_string(u) + ";";
    for (auto& [pi, mult] : factor(d).factors) {
        Place v = Place::finite(pi);
        JordanSymbol js = jordan_decompose(L, v);
        s += "[" + pi.to_string() + ":";
        for (auto& c : js.components)
            s += "(" + std::to_string(c.nu) + "," + std::to_string(c.rank) + "," +
                 std::to_string(c.det_chi) + ")";
        s += "]";
    }
    Place inf = Place::infinity(L.field());
    s += "H" + std::to_string(hasse_symbol(L, inf));
    return s;
}

/// Outcome of the local audibility experiment at one finite place.
struct AudibilityReport {
    std::vector<double> measured_logq;   // log_q |mu(L, pi^{-k} Q)| for k = 0..k_max
    std::vector<double> predicted_logq;  // from the Jordan symbol
    bool magnitudes_match = false;
    JordanSymbol recovered;  // scales/ranks from magnitudes, classes from the gamma step
    JordanSymbol direct;
    bool symbols_match = false;
};

/// Verifies that measured magnitudes of mu match the Jordan-symbol
/// prediction for k = 0..k_max and that scales, ranks and determinant
/// classes can be recovered from the mu sequence alone.
inline AudibilityReport audibility_experiment(const GramLattice& L, const Place& place, int k_max,
                                              unsigned long long budget = 100000000ULL) {
    const Fq& F = L.field();
    int d = place.degree();
    AudibilityReport rep;
    rep.direct = jordan_decompose(L, place);
    rep.recovered.place = place;

    std::vector<ScaledCycValue> mus;
    for (int k = 0; k <= k_max; ++k) mus.push_back(mu_average(L, place, k, budget));
    for (int k = 0; k <= k_max; ++k) rep.measured_logq.push_back(mus[k].log_q_abs());
    for (int k = 0; k <= k_max; ++k) {
        double s = 0;
        for (auto& c : rep.direct.components) s -= c.rank * d * 0.5 * std::max(0, k - c.nu);
        rep.predicted_logq.push_back(s);
    }
    rep.magnitudes_match = true;
    for (int k = 0; k <= k_max; ++k)
        if (std::abs(rep.measured_logq[k] - rep.predicted_logq[k]) > 1e-9)
            rep.magnitudes_match = false;

    // recover scales and ranks: the drop s(k) - s(k+1) equals d/2 * (rank of
    // all components with nu <= k)
    std::vector<int> cumrank(std::max(k_max, 0), 0);
    for (int k = 0; k + 1 <= k_max; ++k) {
        double drop = rep.measured_logq[k] - rep.measured_logq[k + 1];
        double r = 2.0 * drop / d;
        int ri = static_cast<int>(std::lround(r));
        if (std::abs(r - ri) > 1e-6) return rep;  // symbols_match stays false
        cumrank[k] = ri;
    }
    int prev = 0;
    for (int k = 0; k + 1 <= k_max; ++k) {
        if (cumrank[k] > prev) {
            JordanComponent c;
            c.nu = k;
            c.rank = cumrank[k] - prev;
            c.det_chi = 0;  // recovered below
            rep.recovered.components.push_back(c);
            prev = cumrank[k];
        }
    }

    // recover determinant classes through the gamma / Hilbert-symbol step:
    // at k = nu_i + 1 the measured mu equals a known product times
    // gamma(<pi>)^{m_i} (det F_i, pi)_pi; try both signs.
    ScaledCycValue gamma_pi = weil_gamma({RatFunc(place.pi())}, place);
    auto close = [](std::complex<double> a, std::complex<double> b) {
        double scale = std::max({std::abs(a), std::abs(b), 1e-300});
        return std::abs(a - b) <= 1e-6 * scale;
    };
    for (size_t i = 0; i < rep.recovered.components.size(); ++i) {
        int k = rep.recovered.components[i].nu + 1;
        if (k > k_max) break;
        bool found = false;
        for (int sign : {1, -1}) {
            rep.recovered.components[i].det_chi = sign;
            ScaledCycValue pred{CycValue::integer(F.p(), 1), 0, F.q()};
            bool incomplete = false;
            for (size_t j = 0; j <= i && !incomplete; ++j) {
                const auto& cj = rep.recovered.components[j];
                if (cj.det_chi == 0) {
                    incomplete = true;
                    break;
                }
                int kk = k - cj.nu;  // >= 1 for j <= i
                pred.q_half_power += cj.rank * d * kk;
                if (kk % 2 != 0) {
                    // gamma(<pi>)^{rank} carries its own q^{-d/2} factors
                    for (int r = 0; r < cj.rank; ++r) pred = pred * gamma_pi;
                    if (cj.det_chi < 0) pred.sum = -pred.sum;
                }
            }
            if (incomplete) break;
            if (close(pred.embed(), mus[k].embed())) {
                found = true;
                break;
            }
        }
        if (!found) rep.recovered.components[i].det_chi = 0;
    }
    rep.symbols_match = (rep.recovered.components == rep.direct.components);
    return rep;
}

}  // namespace ffqlat
