#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ffqlat/theta.hpp"
#include "test_util.hpp"

using namespace ffqlat;
using namespace ffqlat::testutil;

namespace {

/// Random exact Laurent polynomial in t^{lo} A with top exponent <= hi,
/// guaranteed nonzero.
LaurentSeries random_x(const Fq& F, int lo, int hi, std::mt19937& rng) {
    std::uniform_int_distribution<int> d(0, F.q() - 1);
    while (true) {
        LaurentSeries x(F);
        for (int i = lo; i <= hi; ++i) {
            int c = d(rng);
            if (c) x = x + LaurentSeries::monomial(F, F.from_index(c), i);
        }
        if (!x.known_zero()) return x;
    }
}

GramLattice f3_lattice(const Fq& F3) {
    return diag_lattice(F3, {Poly::one(F3), Poly::one(F3), Poly::t(F3)});
}

}  // namespace

TEST_CASE("theta at x = 0 counts layers") {
    Fq F3(3);
    GramLattice L = f3_lattice(F3);
    SECTION("alpha = t^{-2}: cutoff 2, |L_2| = 3^5") {
        ThetaPoint z = ThetaPoint::canonical(F3, -2, LaurentSeries::zero(F3));
        REQUIRE(z.cutoff() == 2);
        REQUIRE(theta_eval(L, z) == CycValue::integer(3, 243));
    }
    SECTION("positive m: cutoff below 0, only w = 0") {
        ThetaPoint z = ThetaPoint::canonical(F3, 1, random_x(F3, 3, 5, *(new std::mt19937(1))));
        REQUIRE(theta_eval(L, z) == CycValue::integer(3, 1));
    }
}

TEST_CASE("frozen theta values for <1,1,t> over F_3") {
    Fq F3(3);
    GramLattice L = f3_lattice(F3);
    SECTION("m = -1, x = t^3: character trivial on the layer, theta = |L_0| = 9") {
        ThetaPoint z =
            ThetaPoint::canonical(F3, -1, LaurentSeries::monomial(F3, F3.one(), 3));
        REQUIRE(theta_eval(L, z) == CycValue::integer(3, 9));
    }
    SECTION("m = -1, x = 2/t: theta = -3") {
        ThetaPoint z =
            ThetaPoint::canonical(F3, -1, LaurentSeries::monomial(F3, F3.from_int(2), -1));
        REQUIRE(theta_eval(L, z) == CycValue::integer(3, -3));
    }
}

TEST_CASE("Fourier consistency: direct sum equals the spectrum route exactly") {
    std::mt19937 rng(1234);
    for (int q : {3, 5}) {
        Fq F = Fq::with_q(q);
        for (int it = 0; it < 12; ++it) {
            GramLattice L = random_reduced_definite(F, 3, 2, rng);
            int m = 1 + static_cast<int>(rng() % 2);  // coset parameter -m
            ThetaPoint z = ThetaPoint::canonical(F, -m, random_x(F, 1 - 2 * m, 4, rng));
            Spectrum S = enumerate_spectrum(L, z.cutoff());
            REQUIRE(theta_eval(L, z) == theta_from_spectrum(S, z, F));
        }
    }
}

TEST_CASE("theta is well defined on cosets") {
    std::mt19937 rng(4321);
    Fq F3(3);
    GramLattice L = f3_lattice(F3);
    ThetaPoint z = ThetaPoint::canonical(F3, -2, random_x(F3, -3, 3, rng));
    CycValue base = theta_eval(L, z);
    std::uniform_int_distribution<int> du(1, 2), dc(0, 2);
    for (int it = 0; it < 5; ++it) {
        FqElem a = F3.from_index(du(rng));
        LaurentSeries b(F3);
        for (int i = -4; i <= 0; ++i) {
            int c = dc(rng);
            if (c) b = b + LaurentSeries::monomial(F3, F3.from_index(c), i);
        }
        ThetaPoint zt = z.right_translate(a, b);
        REQUIRE(theta_eval(L, zt) == base);
    }
}

TEST_CASE("s_transform") {
    Fq F3(3);
    SECTION("alpha = t^{-1}, x = t^3 maps to alpha' = t^{-4}, x' = -t^{-3}") {
        ThetaPoint z =
            ThetaPoint::canonical(F3, -1, LaurentSeries::monomial(F3, F3.one(), 3));
        ThetaPoint sz = s_transform(z);
        REQUIRE(sz.alpha.top() == Degree(-4));
        REQUIRE(sz.alpha.coeff(-4).v == 1);
        REQUIRE(sz.x.top() == Degree(-3));
        REQUIRE(sz.x.coeff(-3).v == 2);  // -1 mod 3
    }
    SECTION("S^2 returns to the same coset: theta values agree") {
        GramLattice L = f3_lattice(F3);
        ThetaPoint z =
            ThetaPoint::canonical(F3, -1, LaurentSeries::monomial(F3, F3.from_int(2), -1));
        ThetaPoint zz = s_transform(s_transform(z));
        REQUIRE(theta_eval(L, zz) == theta_eval(L, z));
    }
    SECTION("valuation bookkeeping: x a unit times t^{2m+1}") {
        ThetaPoint z =
            ThetaPoint::canonical(F3, 2, LaurentSeries::monomial(F3, F3.from_int(2), 5));
        ThetaPoint sz = s_transform(z);
        REQUIRE(sz.alpha.top() == Degree(2 - 5));
    }
    SECTION("x = 0 is rejected") {
        ThetaPoint z = ThetaPoint::canonical(F3, 1, LaurentSeries::zero(F3));
        REQUIRE_THROWS_AS(s_transform(z), InputError);
    }
}

TEST_CASE("functional equation: hand-verified instance") {
    Fq F3(3);
    GramLattice L = f3_lattice(F3);
    // z with y = t, x = t^3: LHS = 1; RHS = 3^{-1/2} 3^{-9/2} gamma (-243)
    ThetaPoint z = ThetaPoint::canonical(F3, 1, LaurentSeries::monomial(F3, F3.one(), 3));
    REQUIRE(theta_eval(L, z) == CycValue::integer(3, 1));
    ThetaPoint sz = s_transform(z, 1);
    REQUIRE(theta_dual_eval(L, sz) == CycValue::integer(3, -243));
    double g = std::abs(gamma_infinity_scaled(L, z.x).embed() - std::complex<double>(-1, 0));
    REQUIRE(g < 1e-12);
    REQUIRE(functional_equation_residual(L, z) < 1e-9);
}

TEST_CASE("functional equation residuals on random canonical points") {
    std::mt19937 rng(987);
    for (int q : {3, 5}) {
        Fq F = Fq::with_q(q);
        int cap = (q == 3) ? 9 : 5;  // cap on the dual-side enumeration bound
        for (int it = 0; it < 10; ++it) {
            GramLattice L = random_reduced_definite(F, 3, 1, rng);
            int degD = L.det().deg().value();
            int m = 1 + static_cast<int>(rng() % (q == 3 ? 3 : 2));
            int extra = (cap - 2 * m - degD) / 2;
            if (extra < 0) {
                m = 1;
                extra = std::max(0, (cap - 2 - degD) / 2);
            }
            ThetaPoint z = ThetaPoint::canonical(F, m, random_x(F, 2 * m + 1, 2 * m + 1 + extra, rng));
            REQUIRE(functional_equation_residual(L, z, 400000000ULL, 2) < 1e-6);
        }
        // negative coset parameters: both sides are honest sums
        for (int it = 0; it < 6; ++it) {
            GramLattice L = random_reduced_definite(F, 3, 1, rng);
            ThetaPoint z = ThetaPoint::canonical(F, -1, random_x(F, -1, 2, rng));
            REQUIRE(functional_equation_residual(L, z) < 1e-6);
        }
    }
}

TEST_CASE("scaling x by a square unit leaves theta alone") {
    std::mt19937 rng(13579);
    Fq F5(5);
    GramLattice L = random_reduced_definite(F5, 3, 1, rng);
    ThetaPoint z = ThetaPoint::canonical(F5, -1, random_x(F5, -1, 3, rng));
    FqElem u = F5.from_int(2);
    FqElem u2 = F5.mul(u, u);
    ThetaPoint zs{z.alpha, u2 * z.x};
    REQUIRE(theta_eval(L, z) == theta_eval(L, zs));
    REQUIRE(functional_equation_residual(L, z) < 1e-6);
    REQUIRE(functional_equation_residual(L, zs) < 1e-6);
}

TEST_CASE("theta precision and budget guards") {
    Fq F3(3);
    GramLattice L = f3_lattice(F3);
    SECTION("insufficient x precision is a hard error") {
        LaurentSeries x = LaurentSeries::monomial(F3, F3.one(), -1).truncated(-2);
        ThetaPoint z{LaurentSeries::monomial(F3, F3.one(), -2), x};
        REQUIRE(z.cutoff() == 2);
        REQUIRE_THROWS_AS(theta_eval(L, z), PrecisionError);
    }
    SECTION("budget exceeded") {
        ThetaPoint z = ThetaPoint::canonical(F3, -6, LaurentSeries::zero(F3));
        REQUIRE_THROWS_AS(theta_eval(L, z, 1000), BudgetExceededError);
    }
}

TEST_CASE("dual theta at x = 0 counts dual layers") {
    Fq F3(3);
    GramLattice L = f3_lattice(F3);
    // cutoff c on Q(w#) = a_ad / D: dim of that layer is the adjoint layer
    // at c + deg D
    ThetaPoint z = ThetaPoint::canonical(F3, -2, LaurentSeries::zero(F3));
    GramLattice ad = adjoint(L);
    auto dims = closed_form_dims(ad.minima(), z.cutoff() + L.det().deg().value());
    long long expect = 1;
    for (long long i = 0; i < dims.back(); ++i) expect *= 3;
    REQUIRE(theta_dual_eval(L, z) == CycValue::integer(3, expect));
}
