#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ffqlat/gram.hpp"
#include "test_util.hpp"

using namespace ffqlat;
using namespace ffqlat::testutil;

namespace {

/// Brute-force isotropy oracle: search nonzero vectors with coefficient
/// degrees <= dmax for Q(v) = 0.
bool brute_force_isotropic(const GramLattice& L, int dmax) {
    const Fq& F = L.field();
    int n = L.rank();
    long long per = 1;
    for (int i = 0; i <= dmax; ++i) per *= F.q();
    long long total = 1;
    for (int i = 0; i < n; ++i) total *= per;
    for (long long idx = 1; idx < total; ++idx) {
        long long v = idx;
        std::vector<Poly> x(n);
        for (int i = 0; i < n; ++i) {
            std::vector<FqElem> c(dmax + 1);
            long long vi = v % per;
            v /= per;
            for (int k = 0; k <= dmax; ++k) {
                c[k] = F.from_index(static_cast<int>(vi % F.q()));
                vi /= F.q();
            }
            x[i] = Poly(F, c);
        }
        Poly val = Poly::zero(F);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) val = val + x[i] * L.gram()(i, j) * x[j];
        if (val.is_zero()) return true;
    }
    return false;
}

Poly qvalue(const GramLattice& L, const std::vector<Poly>& x) {
    Poly val = Poly::zero(L.field());
    for (int i = 0; i < L.rank(); ++i)
        for (int j = 0; j < L.rank(); ++j) val = val + x[i] * L.gram()(i, j) * x[j];
    return val;
}

}  // namespace

TEST_CASE("is_definite by rank, cross-checked against brute force") {
    Fq F3(3), F5(5);
    SECTION("rank 1 always definite") {
        REQUIRE(is_definite(diag_lattice(F3, {Poly(F3, {1, 2})})));
    }
    SECTION("rank 2 norm forms") {
        // over F_3, -1 is a non-square: x^2+y^2 is anisotropic, x^2+2y^2 is not
        REQUIRE(is_definite(diag_lattice(F3, {Poly::one(F3), Poly::one(F3)})));
        REQUIRE_FALSE(is_definite(diag_lattice(F3, {Poly::one(F3), Poly(F3, {2})})));
        // hyperbolic plane <1, -1>
        REQUIRE_FALSE(is_definite(diag_lattice(F3, {Poly::one(F3), Poly(F3, {-1})})));
        // over F_5, -1 is a square: the roles flip
        REQUIRE(is_definite(diag_lattice(F5, {Poly::one(F5), Poly(F5, {2})})));
        REQUIRE_FALSE(is_definite(diag_lattice(F5, {Poly::one(F5), Poly::one(F5)})));
    }
    SECTION("ternary <1,1,t> over F_3 is definite, <1,2,t> is not") {
        GramLattice good = diag_lattice(F3, {Poly::one(F3), Poly::one(F3), Poly::t(F3)});
        GramLattice bad = diag_lattice(F3, {Poly::one(F3), Poly(F3, {2}), Poly::t(F3)});
        REQUIRE(is_definite(good));
        REQUIRE_FALSE(is_definite(bad));
        REQUIRE_FALSE(brute_force_isotropic(good, 2));
        REQUIRE(brute_force_isotropic(bad, 2));
    }
    SECTION("quaternary") {
        GramLattice q4 = diag_lattice(
            F3, {Poly::one(F3), Poly::one(F3), Poly::t(F3), Poly::t(F3)});
        REQUIRE(is_definite(q4));
        REQUIRE_FALSE(brute_force_isotropic(q4, 1));
        GramLattice iso = diag_lattice(
            F3, {Poly::one(F3), Poly::one(F3), Poly::one(F3), Poly::t(F3)});
        REQUIRE_FALSE(is_definite(iso));  // ternary unimodular block is isotropic
    }
    SECTION("fast reduced-shape path agrees with the general path") {
        std::mt19937 rng(31337);
        for (int q : {3, 5}) {
            Fq F = Fq::with_q(q);
            int checked = 0;
            while (checked < 60) {
                std::vector<int> mu = {0, 0, 0};
                std::uniform_int_distribution<int> dmu(0, 2);
                for (auto& m : mu) m = dmu(rng);
                std::sort(mu.begin(), mu.end());
                PolyMatrix S(F, 3, 3);
                for (int i = 0; i < 3; ++i) S(i, i) = random_poly_exact_deg(F, mu[i], rng);
                for (int i = 0; i < 3; ++i)
                    for (int j = i + 1; j < 3; ++j) {
                        Poly off = random_poly_below_deg(F, mu[i], rng);
                        S(i, j) = off;
                        S(j, i) = off;
                    }
                try {
                    GramLattice L(F, S);
                    if (!L.reduced()) continue;
                    // general path: diagonalize over K
                    std::vector<SquareClassAtInfinity> cls;
                    for (const RatFunc& d : L.diagonalize_over_K())
                        cls.push_back(square_class_infinity(d));
                    bool general = anisotropic_at_infinity(cls, F);
                    REQUIRE(is_definite(L) == general);
                    ++checked;
                } catch (const SingularFormError&) {
                }
            }
        }
    }
}

TEST_CASE("reduce examples") {
    Fq F3(3);
    SECTION("already reduced: diag(1,1,t) over F_3 with U = I") {
        GramLattice L = diag_lattice(F3, {Poly::one(F3), Poly::one(F3), Poly::t(F3)});
        auto [R, U] = reduce(L);
        REQUIRE(R.gram() == L.gram());
        REQUIRE(U == PolyMatrix::identity(F3, 3));
    }
    SECTION("[[1,t],[t,t^2+t]] reduces to diag(1,t) with U = [[1,-t],[0,1]]") {
        PolyMatrix S(F3, 2, 2);
        S(0, 0) = Poly::one(F3);
        S(0, 1) = Poly::t(F3);
        S(1, 0) = Poly::t(F3);
        S(1, 1) = Poly(F3, {0, 1, 1});
        GramLattice L(F3, S);
        auto [R, U] = reduce(L);
        REQUIRE(R.gram()(0, 0) == Poly::one(F3));
        REQUIRE(R.gram()(1, 1) == Poly::t(F3));
        REQUIRE(R.gram()(0, 1).is_zero());
        REQUIRE(U(0, 0) == Poly::one(F3));
        REQUIRE(U(0, 1) == -Poly::t(F3));
        REQUIRE(U(1, 0).is_zero());
        REQUIRE(U(1, 1) == Poly::one(F3));
        REQUIRE(successive_minima(L) == std::vector<int>{0, 1});
    }
    SECTION("rank 1 is always its own reduction") {
        GramLattice L = diag_lattice(F3, {Poly(F3, {2, 1, 1})});
        auto [R, U] = reduce(L);
        REQUIRE(R.gram() == L.gram());
    }
    SECTION("isotropic input raises NotDefinite") {
        GramLattice bad = diag_lattice(F3, {Poly::one(F3), Poly(F3, {2}), Poly::t(F3)});
        REQUIRE_THROWS_AS(reduce(bad), NotDefiniteError);
    }
}

TEST_CASE("successive minima examples") {
    Fq F5(5);
    FqElem d5 = F5.delta();
    REQUIRE(d5.v == 2);
    REQUIRE(successive_minima(diag_lattice(
                F5, {Poly::one(F5), Poly::constant(F5, d5), Poly::t(F5)})) ==
            std::vector<int>{0, 0, 1});
    REQUIRE(successive_minima(diag_lattice(
                F5, {Poly::one(F5), Poly::t(F5), Poly(F5, {0, 0, 2})})) ==
            std::vector<int>{0, 1, 2});
}

TEST_CASE("reduction properties on random definite lattices") {
    std::mt19937 rng(777);
    for (int q : {3, 5}) {
        Fq F = Fq::with_q(q);
        for (int it = 0; it < 30; ++it) {
            int rank = 2 + it % 3;
            GramLattice L0 = random_reduced_definite(F, rank, 3, rng);
            // scramble with a random unimodular transform
            PolyMatrix U = random_unimodular(F, rank, rng);
            GramLattice L = transform(L0, U);
            auto [R, V] = reduce(L);
            REQUIRE(R.reduced());
            REQUIRE(V.transpose() * L.gram() * V == R.gram());
            // idempotence
            auto [R2, V2] = reduce(R);
            REQUIRE(R2.gram() == R.gram());
            // Gerstein: minima invariant under change of basis
            REQUIRE(R.minima() == L0.minima());
        }
    }
}

TEST_CASE("degree valuation law for reduced definite lattices") {
    std::mt19937 rng(888);
    for (int q : {3, 5}) {
        Fq F = Fq::with_q(q);
        for (int it = 0; it < 5; ++it) {
            GramLattice L = random_reduced_definite(F, 3, 3, rng);
            const auto& mu = L.minima();
            std::uniform_int_distribution<int> dd(-1, 2);
            for (int trial = 0; trial < 200; ++trial) {
                std::vector<Poly> x(3);
                bool all_zero = true;
                std::vector<int> degs(3, -1000);
                for (int i = 0; i < 3; ++i) {
                    int deg = dd(rng);
                    if (deg < 0) {
                        x[i] = Poly::zero(F);
                    } else {
                        x[i] = random_poly_exact_deg(F, deg, rng);
                        degs[i] = deg;
                        all_zero = false;
                    }
                }
                if (all_zero) continue;
                int expect = -1000000;
                for (int i = 0; i < 3; ++i)
                    if (degs[i] > -1000) expect = std::max(expect, 2 * degs[i] + mu[i]);
                REQUIRE(qvalue(L, x).deg() == Degree(expect));
            }
        }
    }
}

TEST_CASE("adjoint lattice") {
    Fq F3(3), F5(5);
    SECTION("diagonal adjugate, reversed") {
        Poly a(F3, {2}), b(F3, {1, 1}), c(F3, {0, 0, 1});
        GramLattice L = diag_lattice(F3, {a, b, c});
        GramLattice ad = adjoint(L);
        REQUIRE(ad.gram()(0, 0) == a * b);
        REQUIRE(ad.gram()(1, 1) == a * c);
        REQUIRE(ad.gram()(2, 2) == b * c);
    }
    SECTION("diag(1,delta,t) over F_5: adjoint diag(delta,t,delta t), minima (0,1,1)") {
        Poly one = Poly::one(F5), del = Poly::constant(F5, F5.delta()), t = Poly::t(F5);
        GramLattice L = diag_lattice(F5, {one, del, t});
        REQUIRE(is_definite(L));
        GramLattice ad = adjoint(L);
        REQUIRE(ad.gram()(0, 0) == del);
        REQUIRE(ad.gram()(1, 1) == t);
        REQUIRE(ad.gram()(2, 2) == del * t);
        REQUIRE(ad.reduced());
        REQUIRE(ad.minima() == std::vector<int>{0, 1, 1});
    }
    SECTION("adjoint of adjoint = det * original (rank 3)") {
        std::mt19937 rng(1001);
        for (int q : {3, 5}) {
            Fq F = Fq::with_q(q);
            for (int it = 0; it < 20; ++it) {
                GramLattice L = random_reduced_definite(F, 3, 2, rng);
                GramLattice adad = adjoint(adjoint(L));
                Poly D = L.det();
                PolyMatrix expect = L.gram();
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) expect(i, j) = D * expect(i, j);
                REQUIRE(adad.gram() == expect);
            }
        }
    }
    SECTION("adjoint minima pattern (mu1+mu2, mu1+mu3, mu2+mu3)") {
        std::mt19937 rng(1002);
        for (int q : {3, 5}) {
            Fq F = Fq::with_q(q);
            for (int it = 0; it < 15; ++it) {
                GramLattice L = random_reduced_definite(F, 3, 3, rng);
                const auto& mu = L.minima();
                GramLattice ad = adjoint(L);
                REQUIRE(ad.reduced());
                REQUIRE(ad.minima() ==
                        std::vector<int>{mu[0] + mu[1], mu[0] + mu[2], mu[1] + mu[2]});
            }
        }
    }
}

TEST_CASE("determinant class") {
    Fq F3(3), F5(5);
    auto dc1 = determinant_class(diag_lattice(F3, {Poly::one(F3), Poly::one(F3), Poly::t(F3)}));
    REQUIRE(dc1.first == Poly::t(F3));
    REQUIRE(dc1.second == 1);
    auto dc2 = determinant_class(diag_lattice(F5, {Poly::one(F5), Poly(F5, {2}), Poly::t(F5)}));
    REQUIRE(dc2.first == Poly::t(F5));
    REQUIRE(dc2.second == -1);
    PolyMatrix S(F3, 2, 2);
    S(0, 0) = Poly::one(F3);
    S(0, 1) = Poly::t(F3);
    S(1, 0) = Poly::t(F3);
    S(1, 1) = Poly(F3, {0, 1, 1});
    auto dc3 = determinant_class(GramLattice(F3, S));
    REQUIRE(dc3.first == Poly::t(F3));
    REQUIRE(dc3.second == 1);
}

TEST_CASE("ternary minima parity: never all equal for definite forms") {
    std::mt19937 rng(2024);
    for (int q : {3, 5}) {
        Fq F = Fq::with_q(q);
        for (int it = 0; it < 40; ++it) {
            GramLattice L = random_reduced_definite(F, 3, 3, rng);
            const auto& mu = L.minima();
            bool all_same = (mu[0] % 2 == mu[1] % 2) && (mu[1] % 2 == mu[2] % 2);
            REQUIRE_FALSE(all_same);
        }
    }
}
