#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ffqlat/fieldsums.hpp"
#include "test_util.hpp"

using namespace ffqlat;
using namespace ffqlat::testutil;

namespace {

FqQuadSpace random_space(const Fq& F, int n, std::mt19937& rng) {
    std::uniform_int_distribution<int> d(0, F.q() - 1);
    std::vector<std::vector<FqElem>> m(n, std::vector<FqElem>(n, F.zero()));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            FqElem v = F.from_index(d(rng));
            m[i][j] = v;
            m[j][i] = v;
        }
    return FqQuadSpace(F, m);
}

}  // namespace

TEST_CASE("gauss sum examples over F_3") {
    Fq F3(3);
    SECTION("G = 1 + 2 zeta_3 and G^2 = -3") {
        CycValue G = gauss_sum_G(F3);
        REQUIRE(G == CycValue::integer(3, 1) + 2 * CycValue::root(3, 1));
        REQUIRE(G * G == CycValue::integer(3, -3));
    }
    SECTION("zero form on F_q^n sums to q^n") {
        REQUIRE(gauss_sum(FqQuadSpace::zero(F3, 3)) == CycValue::integer(3, 27));
    }
    SECTION("phi = <1, delta>: direct 9-term sum equals psi(delta) G^2 = 3") {
        FqQuadSpace W = FqQuadSpace::diagonal(F3, {F3.one(), F3.delta()});
        CycValue direct = gauss_sum(W);
        REQUIRE(direct == CycValue::integer(3, 3));
        REQUIRE(direct == gauss_sum_closed_form(W));
    }
}

TEST_CASE("G^2 = psi(-1) q exactly for q in {3,5,7,9,25}") {
    for (int q : {3, 5, 7, 9, 25}) {
        Fq F = Fq::with_q(q);
        CycValue G = gauss_sum_G(F);
        long long sign = F.chi(F.neg(F.one()));
        REQUIRE(G * G == CycValue::integer(F.p(), sign * q));
    }
}

TEST_CASE("direct gauss sums match the closed form on random spaces") {
    std::mt19937 rng(909090);
    for (int q : {3, 5, 7, 9}) {
        Fq F = Fq::with_q(q);
        for (int it = 0; it < 30; ++it) {
            int n = 1 + static_cast<int>(rng() % 5);
            FqQuadSpace W = random_space(F, n, rng);
            REQUIRE(gauss_sum(W) == gauss_sum_closed_form(W));
        }
    }
}

TEST_CASE("gauss sums are multiplicative over orthogonal sums") {
    std::mt19937 rng(101010);
    Fq F5(5);
    for (int it = 0; it < 10; ++it) {
        FqQuadSpace A = random_space(F5, 2, rng), B = random_space(F5, 2, rng);
        // block direct sum
        int n = 4;
        std::vector<std::vector<FqElem>> m(n, std::vector<FqElem>(n, F5.zero()));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                m[i][j] = A.matrix()[i][j];
                m[i + 2][j + 2] = B.matrix()[i][j];
            }
        REQUIRE(gauss_sum(FqQuadSpace(F5, m)) == gauss_sum(A) * gauss_sum(B));
    }
}

TEST_CASE("Gamma separates F_q-equivalence classes") {
    // Gamma(W,phi) = Gamma(W,phi') iff same rank and same regular det class
    std::mt19937 rng(121212);
    for (int q : {3, 5}) {
        Fq F = Fq::with_q(q);
        for (int it = 0; it < 40; ++it) {
            int n = 1 + static_cast<int>(rng() % 3);
            FqQuadSpace A = random_space(F, n, rng), B = random_space(F, n, rng);
            bool equal_class =
                A.rank() == B.rank() && A.regular_det_chi() == B.regular_det_chi();
            REQUIRE((gauss_sum(A) == gauss_sum(B)) == equal_class);
        }
    }
}

TEST_CASE("carlitz criterion examples") {
    Fq F3(3);
    SECTION("a system is isospectral with a relabeled copy") {
        FqQuadSpace a = FqQuadSpace::diagonal(F3, {F3.one(), F3.delta()});
        FqQuadSpace b = FqQuadSpace::diagonal(F3, {F3.delta(), F3.one()});
        QFSystem Phi{{a}};
        QFSystem PhiP{{b}};
        REQUIRE(carlitz_isospectral(Phi, PhiP));
        // the coordinate swap makes the fibers genuinely equal
        REQUIRE(fiber_counts(Phi) == fiber_counts(PhiP));
    }
    SECTION("(x^2, y^2) vs (x^2, delta y^2) differ in the fiber over (0,1)") {
        std::vector<std::vector<FqElem>> m1(2, std::vector<FqElem>(2, F3.zero()));
        m1[0][0] = F3.one();
        std::vector<std::vector<FqElem>> m2(2, std::vector<FqElem>(2, F3.zero()));
        m2[1][1] = F3.one();
        std::vector<std::vector<FqElem>> m3(2, std::vector<FqElem>(2, F3.zero()));
        m3[1][1] = F3.delta();
        QFSystem Phi{{FqQuadSpace(F3, m1), FqQuadSpace(F3, m2)}};
        QFSystem PhiP{{FqQuadSpace(F3, m1), FqQuadSpace(F3, m3)}};
        auto ca = fiber_counts(Phi), cb = fiber_counts(PhiP);
        REQUIRE(ca[{0, 1}] == 2);
        REQUIRE(cb[{0, 1}] == 0);
        REQUIRE_FALSE(carlitz_isospectral(Phi, PhiP));
    }
}

TEST_CASE("carlitz agrees with brute-force fiber counting both ways") {
    std::mt19937 rng(343434);
    for (int q : {3, 5}) {
        Fq F = Fq::with_q(q);
        for (int it = 0; it < 25; ++it) {
            int n = 1 + static_cast<int>(rng() % 4);
            int m = 1 + static_cast<int>(rng() % 3);
            QFSystem Phi, PhiP;
            for (int i = 0; i < m; ++i) Phi.forms.push_back(random_space(F, n, rng));
            if (it % 3 == 0) {
                // genuinely equivalent: transform by a random linear map
                PolyMatrix U = random_unimodular(F, n, rng, 6, 0);
                for (int i = 0; i < m; ++i) {
                    std::vector<std::vector<FqElem>> mm(n, std::vector<FqElem>(n, F.zero()));
                    for (int r = 0; r < n; ++r)
                        for (int c = 0; c < n; ++c) {
                            FqElem acc = F.zero();
                            for (int a = 0; a < n; ++a)
                                for (int b = 0; b < n; ++b)
                                    acc = F.add(acc, F.mul(F.mul(U(a, r).coeff(0), U(b, c).coeff(0)),
                                                           Phi.forms[i].matrix()[a][b]));
                            mm[r][c] = acc;
                        }
                    PhiP.forms.push_back(FqQuadSpace(F, mm));
                }
            } else {
                for (int i = 0; i < m; ++i) PhiP.forms.push_back(random_space(F, n, rng));
            }
            REQUIRE(carlitz_isospectral(Phi, PhiP) == (fiber_counts(Phi) == fiber_counts(PhiP)));
        }
    }
}

TEST_CASE("squares-proportionality law") {
    SECTION("F = G and F = u^2 G are trivially consistent") {
        Fq F3(3);
        Poly f(F3, {1, 2, 1});
        auto rep = verify_squares_proportional(f, f);
        REQUIRE(rep.pointwise_square_class_equal);
        REQUIRE(rep.proportional_by_square);
        REQUIRE(rep.implication_held);
    }
    SECTION("exhaustive over all degree-2 pairs for q = 3 and q = 5") {
        for (int q : {3, 5}) {
            Fq F = Fq::with_q(q);
            std::vector<Poly> quads;
            for (int a = 1; a < F.q(); ++a)
                for (int b = 0; b < F.q(); ++b)
                    for (int c = 0; c < F.q(); ++c)
                        quads.push_back(Poly(F, {F.from_index(c), F.from_index(b), F.from_index(a)}));
            long long violations = 0;
            for (auto& f : quads)
                for (auto& g : quads)
                    if (!verify_squares_proportional(f, g).implication_held) ++violations;
            REQUIRE(violations == 0);
        }
    }
}

TEST_CASE("binary automorphism transitivity") {
    Fq F3(3);
    SECTION("t(x^2+y^2) over F_3 at a = t") {
        GramLattice Q0 = diag_lattice(F3, {Poly::t(F3), Poly::t(F3)});
        auto rep = verify_binary_transitivity(Q0, Poly::t(F3));
        REQUIRE(rep.solutions.size() == 4);  // x^2+y^2 = 1 over F_3
        REQUIRE(rep.transitive);
    }
    SECTION("value not represented: vacuously transitive") {
        GramLattice Q0 = diag_lattice(F3, {Poly::t(F3), Poly::t(F3)});
        auto rep = verify_binary_transitivity(Q0, Poly(F3, {0, 2}));  // 2t = delta * t
        REQUIRE(rep.solutions.empty());
        REQUIRE(rep.transitive);
    }
    SECTION("random mu1 = mu2 instances over q in {3,5,7}") {
        std::mt19937 rng(565656);
        for (int q : {3, 5, 7}) {
            Fq F = Fq::with_q(q);
            int done = 0;
            while (done < 12) {
                GramLattice L = random_reduced_definite(F, 2, 2, rng);
                if (L.minima()[0] != L.minima()[1]) continue;
                // a = value of a random nonzero constant vector
                std::uniform_int_distribution<int> d(0, F.q() - 1);
                FqElem x = F.from_index(d(rng)), y = F.from_index(d(rng));
                if (x.v == 0 && y.v == 0) continue;
                Poly a = F.mul(x, x) * L.gram()(0, 0) +
                         F.mul(F.two(), F.mul(x, y)) * L.gram()(0, 1) +
                         F.mul(y, y) * L.gram()(1, 1);
                auto rep = verify_binary_transitivity(L, a);
                REQUIRE(rep.transitive);
                ++done;
            }
        }
    }
}
