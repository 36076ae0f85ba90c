#pragma once

#include "localdata.hpp"
#include "spectrum.hpp"

namespace ffqlat {

/// Point of the coset domain for theta evaluation, carried as the pair
/// (alpha, x) with alpha the diagonal entry and x = alpha * beta the product
/// actually used by the character: theta_L(z) = sum over w in L of
/// Psi(t^2 alpha^2 Q(w)) e{t^2 x Q(w)}. Canonical points have alpha = t^m
/// and x a Laurent polynomial in t^{2m+1} A; S-transforms leave that chart
/// but stay representable here.
struct ThetaPoint {
    LaurentSeries alpha;
    LaurentSeries x;

    /// Canonical coset representative: alpha = t^m, x in t^{2m+1} A.
    static ThetaPoint canonical(const Fq& F, int m, const LaurentSeries& x) {
        for (auto& [i, c] : x.known_coeffs())
            if (i < 2 * m + 1)
                throw InputError("canonical coset needs x in t^{2m+1} A");
        if (!x.exact()) throw InputError("canonical coset needs an exact Laurent polynomial");
        return {LaurentSeries::monomial(F, F.one(), m), x};
    }

    /// Degree cutoff: Psi(t^2 alpha^2 Q(w)) is 1 exactly when
    /// deg Q(w) <= -2 - 2 deg(alpha).
    int cutoff() const { return -2 - 2 * alpha.top().value(); }

    /// Right translation by [[a, b],[0, a^{-1}]] in SL_2(O_infinity)
    /// (a a unit, b integral): alpha -> a*alpha, x -> x + a*b*alpha^2.
    ThetaPoint right_translate(FqElem a, const LaurentSeries& b) const {
        if (a.v == 0) throw InputError("translation needs a unit diagonal");
        for (auto& [i, c] : b.known_coeffs())
            if (i > 0) throw InputError("translation entry must lie in O_infinity");
        return {a * alpha, x + (a * b) * (alpha * alpha)};
    }
};

/// S-transform: z -> S.z with S = [[0,-1],[1,0]]; the new pair is
/// (alpha / x, -1/x), with Laurent precision sufficient for a subsequent
/// theta evaluation against a form whose values have denominator degree
/// at most dual_det_deg.
inline ThetaPoint s_transform(const ThetaPoint& z, int dual_det_deg = 0) {
    const Fq& F = z.alpha.field();
    if (z.x.known_zero()) throw InputError("s_transform needs x != 0");
    int topx = z.x.top().value();
    int topa = z.alpha.top().value();
    int cutoff_new = -2 - 2 * (topa - topx);
    int need = -1 - (cutoff_new + dual_det_deg) - 2;
    LaurentSeries invx = laurent_invert(z.x, std::min(need, -topx - 1) - 2);
    return {z.alpha * invx, -invx};
}

namespace detail {

/// Accumulator for character sums over lattice values: the exponent of
/// zeta_p is Tr of a fixed linear form in the value's coefficients.
struct CharacterSumAccumulator {
    const Fq* F;
    std::vector<uint16_t> X;  // X[j] multiplies coefficient j of the value
    std::vector<long long> zeta;

    CharacterSumAccumulator(const Fq& f, std::vector<uint16_t> xtab)
        : F(&f), X(std::move(xtab)), zeta(f.p(), 0) {}

    void add(const std::vector<uint16_t>& coeffs, long long w) {
        const uint16_t* mul = F->mul_table();
        const uint16_t* add = F->add_table();
        int q = F->q();
        uint16_t acc = 0;
        size_t nn = std::min(coeffs.size(), X.size());
        for (size_t j = 0; j < nn; ++j) {
            if (!coeffs[j] || !X[j]) continue;
            acc = add[static_cast<size_t>(acc) * q + mul[static_cast<size_t>(coeffs[j]) * q + X[j]]];
        }
        zeta[F->trace(FqElem{acc})] += w;
    }
    void merge(const CharacterSumAccumulator& o) {
        for (size_t i = 0; i < zeta.size(); ++i) zeta[i] += o.zeta[i];
    }
    CycValue value() const {
        CycValue s(F->p());
        for (int j = 0; j < F->p(); ++j)
            if (zeta[j]) s = s + zeta[j] * CycValue::root(F->p(), j);
        return s;
    }
};

}  // namespace detail

/// theta_L(z), exact in Z[zeta_p]: a finite sum over the layer
/// L_{cutoff(z)}; the character exponent of a value a is the t^{-1}
/// coefficient of x*a, a linear form in the coefficients of a.
inline CycValue theta_eval(const GramLattice& L, const ThetaPoint& z,
                           unsigned long long budget = 200000000ULL, int jobs = 1) {
    const Fq& F = L.field();
    if (!L.reduced()) throw InputError("theta_eval needs a reduced lattice");
    int cut = z.cutoff();
    if (cut < 0) return CycValue::integer(F.p(), 1);  // only w = 0 survives
    // need x's coefficients at exponents -1 .. -1-cut
    std::vector<uint16_t> X(cut + 1, 0);
    for (int j = 0; j <= cut; ++j) X[j] = z.x.coeff(-1 - j).v;  // throws below precision
    detail::SpectrumKernel K = detail::make_value_kernel(L, cut, budget);
    auto acc = detail::run_kernel<detail::CharacterSumAccumulator>(
        K, jobs, [&] { return detail::CharacterSumAccumulator(F, X); });
    return acc.value();
}

/// theta_{L^sharp}(z): the dual lattice carries Q with values Q_ad(w)/D,
/// enumerated through the (reduced) adjoint Gram.
inline CycValue theta_dual_eval(const GramLattice& L, const ThetaPoint& z,
                                unsigned long long budget = 200000000ULL, int jobs = 1) {
    const Fq& F = L.field();
    GramLattice ad = adjoint(L);
    if (!ad.reduced()) ad = reduce(ad).lattice;
    const Poly& D = L.det();
    int degD = D.deg().value();
    int cut = z.cutoff();          // on Q(w^sharp) = a_ad / D
    int cut_ad = cut + degD;       // on the adjoint values a_ad
    if (cut_ad < 0) return CycValue::integer(F.p(), 1);
    // character exponent: t^{-1} coefficient of (x/D) * a_ad
    std::vector<uint16_t> X(cut_ad + 1, 0);
    if (!z.x.known_zero()) {
        int topx = z.x.top().value();
        LaurentSeries xoverD =
            z.x * laurent_invert(LaurentSeries::from_poly(D), -1 - cut_ad - std::max(topx, 0) - 2);
        for (int j = 0; j <= cut_ad; ++j) X[j] = xoverD.coeff(-1 - j).v;
    }
    detail::SpectrumKernel K = detail::make_value_kernel(ad, cut_ad, budget);
    auto acc = detail::run_kernel<detail::CharacterSumAccumulator>(
        K, jobs, [&] { return detail::CharacterSumAccumulator(F, X); });
    return acc.value();
}

/// theta via the spectrum (E:use): sum of R(L,a) e{x t^2 a} over
/// deg a <= cutoff. Exact; the independent route for Fourier consistency.
inline CycValue theta_from_spectrum(const Spectrum& S, const ThetaPoint& z, const Fq& F) {
    int cut = z.cutoff();
    if (cut < 0) return CycValue::integer(F.p(), 1);
    if (S.bound < cut) throw InsufficientBoundError("spectrum does not reach the theta cutoff");
    CycValue out(F.p());
    for (auto& [a, cnt] : S.counts) {
        if (a.deg() > cut) continue;
        FqElem c = F.zero();
        for (int j = 0; j <= a.deg().value_or(-1); ++j)
            c = F.add(c, F.mul(a.coeff(j), z.x.coeff(-1 - j)));
        out = out + cnt * CycValue::root(F.p(), F.trace(c));
    }
    return out;
}

/// Weil index at infinity of x*Q from square-class data alone.
inline ScaledCycValue gamma_infinity_scaled(const GramLattice& L, const LaurentSeries& x) {
    const Fq& F = L.field();
    SquareClassAtInfinity cx{((x.top().value() % 2) + 2) % 2, F.chi(x.coeff(x.top().value()))};
    ScaledCycValue out{CycValue::integer(F.p(), 1), 0, F.q()};
    for (const RatFunc& d : L.diagonalize_over_K()) {
        SquareClassAtInfinity c = cx * square_class_infinity(d);
        if (c.parity == 0) continue;
        // Gauss sum of <u> over F_q with chi(u) = c.unit_chi
        FqElem u = c.unit_chi > 0 ? F.one() : F.delta();
        CycValue sum(F.p());
        for (int i = 0; i < F.q(); ++i) {
            FqElem xx = F.from_index(i);
            sum = sum + CycValue::root(F.p(), F.trace(F.mul(u, F.mul(xx, xx))));
        }
        out = out * ScaledCycValue{sum, 1, F.q()};
    }
    return out;
}

/// |LHS - RHS| of the functional equation
/// theta_L(z) = |D|^{-1/2} |x|^{-3/2} gamma_inf(xQ) theta_{L#}(S.z)
/// under the complex embedding. Ternary lattices, x != 0.
inline double functional_equation_residual(const GramLattice& L, const ThetaPoint& z,
                                           unsigned long long budget = 400000000ULL,
                                           int jobs = 1) {
    if (L.rank() != 3) throw InputError("functional equation check is for ternary lattices");
    if (z.x.known_zero()) throw InputError("functional equation needs x != 0");
    const Fq& F = L.field();
    std::complex<double> lhs = theta_eval(L, z, budget, jobs).embed();
    int degD = L.det().deg().value();
    ThetaPoint sz = s_transform(z, degD);
    std::complex<double> theta_dual = theta_dual_eval(L, sz, budget, jobs).embed();
    double qd = static_cast<double>(F.q());
    double scale = std::pow(qd, -0.5 * degD) * std::pow(qd, -1.5 * z.x.top().value());
    std::complex<double> rhs = scale * gamma_infinity_scaled(L, z.x).embed() * theta_dual;
    return std::abs(lhs - rhs);
}

}  // namespace ffqlat
