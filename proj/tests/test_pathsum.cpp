#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qrw/pathsum.hpp"
#include "qrw/sampling.hpp"
#include "qrw/walk.hpp"

using namespace qrw;

namespace {

const double kS = 1.0 / std::numbers::sqrt2;

oracle::Entries entries(const UnitaryCoin& c) { return {c.a(), c.b(), c.c(), c.d()}; }

double coeff_diff(const BasisCombo& x, Complex p, Complex q, Complex r, Complex s) {
    return std::max({std::abs(x.p - p), std::abs(x.q - q), std::abs(x.r - r), std::abs(x.s - s)});
}

}  // namespace

TEST(PathSplitTest, Sites) {
    const PathSplit s = PathSplit::at_site(6, 2);
    EXPECT_EQ(s.l, 2);
    EXPECT_EQ(s.m, 4);
    EXPECT_EQ(s.k(), 2);
    EXPECT_THROW(PathSplit::at_site(3, 2), ParamOutOfRange);
    EXPECT_THROW(PathSplit::at_site(2, 4), ParamOutOfRange);
    EXPECT_THROW(PathSplit(-1, 0), ParamOutOfRange);
}

TEST(Binomial, Values) {
    EXPECT_EQ(binomial(10, 3), 120.0);
    EXPECT_EQ(binomial(5, 7), 0.0);
    EXPECT_EQ(binomial(0, 0), 1.0);
    EXPECT_NEAR(binomial<long double>(60, 30), 1.1826458156486142e17L, 1e3L);
}

TEST(XiClosedForm, WorkedExamples) {
    const UnitaryCoin c = gudder_coin(0.6);
    const Complex a = c.a(), b = c.b(), cc = c.c(), d = c.d();
    const PQRSBasis basis = pqrs(c, WalkType::A);
    EXPECT_LT(coeff_diff(xi_closed_form({3, 1}, basis), 2.0 * a * b * cc, 0.0, a * a * b, a * a * cc), 1e-14);
    EXPECT_LT(coeff_diff(xi_closed_form({4, 0}, basis), a * a * a, 0.0, 0.0, 0.0), 1e-14);
    EXPECT_LT(coeff_diff(xi_closed_form({0, 4}, basis), 0.0, d * d * d, 0.0, 0.0), 1e-14);
    // (2,2): the R and S coefficients carry a second term each.
    EXPECT_LT(coeff_diff(xi_closed_form({2, 2}, basis), b * cc * d, a * b * cc, a * b * d + b * b * cc,
                         a * cc * d + b * cc * cc),
              1e-14);
    EXPECT_LT(coeff_diff(xi_closed_form({1, 3}, basis), 0.0, 2.0 * b * cc * d, b * d * d, cc * d * d), 1e-14);
}

TEST(XiClosedForm, HadamardOneOne) {
    const BasisCombo x = xi_closed_form({1, 1}, pqrs(hadamard_coin(), WalkType::A));
    EXPECT_LT(coeff_diff(x, 0.0, 0.0, kS, kS), 1e-15);
}

TEST(XiClosedForm, RefusesZeroEntryCoins) {
    const PQRSBasis b = pqrs(make_coin(1.0, 0.0, 0.0, 1.0), WalkType::A);
    EXPECT_THROW(xi_closed_form({2, 2}, b), CoinHasZeroEntry);
    EXPECT_NO_THROW(xi_closed_form({3, 0}, b));
    EXPECT_NEAR(prob_at({2, 2}, QubitState::left(), b), 0.0, 1e-15);
    EXPECT_NEAR(prob_at({2, 0}, QubitState::left(), b), 1.0, 1e-15);
}

TEST(XiBruteForce, CapAndEmpty) {
    const PQRSBasis b = pqrs(hadamard_coin(), WalkType::A);
    EXPECT_THROW(xi_bruteforce({8, 7}, b), TooLarge);
    EXPECT_LT(max_abs_diff(recombine(xi_bruteforce({0, 0}, b), b), Matrix2::identity()), 1e-15);
}

TEST(XiBruteForce, MatchesRecursionOracle) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 3; ++i) {
        const UnitaryCoin c = random_coin(rng);
        for (bool a_type : {true, false}) {
            const PQRSBasis b = pqrs(c, a_type ? WalkType::A : WalkType::G);
            for (int l = 0; l <= 6; ++l) {
                for (int m = 0; m + l <= 10; ++m) {
                    const Matrix2 got = recombine(xi_bruteforce({l, m}, b), b);
                    const oracle::Mat want = oracle::xi(entries(c), a_type, l, m);
                    for (int e = 0; e < 4; ++e) EXPECT_NEAR(std::abs(got.e[e] - want[e]), 0.0, 1e-12);
                }
            }
        }
    }
}

TEST(XiClosedForm, MatchesBruteForceAllSplits) {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 10; ++i) {
        const UnitaryCoin c = random_coin(rng);
        for (WalkType wt : {WalkType::A, WalkType::G}) {
            const PQRSBasis b = pqrs(c, wt);
            for (int l = 0; l <= 12; ++l)
                for (int m = 0; l + m <= 12; ++m)
                    EXPECT_LT(max_abs_diff(xi_closed_form({l, m}, b), xi_bruteforce({l, m}, b)), 1e-10)
                        << l << "," << m;
        }
    }
}

TEST(XiClosedForm, TypeIndependentCoefficients) {
    std::mt19937_64 rng(23);
    const UnitaryCoin c = random_coin(rng);
    const PQRSBasis a = pqrs(c, WalkType::A), g = pqrs(c, WalkType::G);
    for (int l = 0; l <= 8; ++l) {
        for (int m = 0; l + m <= 10; ++m) {
            const BasisCombo x = xi_bruteforce({l, m}, a), y = xi_bruteforce({l, m}, g);
            EXPECT_LT(coeff_diff(x, y.p, y.q, y.r, y.s), 1e-12);
        }
    }
}

TEST(ProbAt, Examples) {
    const PQRSBasis b = pqrs(hadamard_coin(), WalkType::A);
    EXPECT_NEAR(prob_at({1, 0}, QubitState::right(), b), 0.5, 1e-15);
    EXPECT_NEAR(prob_at({0, 0}, QubitState::right(), b), 1.0, 1e-15);
    EXPECT_NEAR(prob_at({2, 0}, QubitState::left(), b), 0.25, 1e-15);
    EXPECT_NEAR(prob_at({1, 1}, QubitState::left(), b), 0.5, 1e-15);
    EXPECT_NEAR(prob_at({0, 2}, QubitState::left(), b), 0.25, 1e-15);
}

TEST(Moments, HandValues) {
    const UnitaryCoin h = hadamard_coin();
    EXPECT_NEAR(moment_closed_form(make_moment_context(h, WalkType::G, QubitState::right()), 1, 1), 1.0, 1e-14);
    EXPECT_NEAR(moment_closed_form(make_moment_context(h, WalkType::A, QubitState::left()), 2, 2), 2.0, 1e-14);
    const MomentContext sym = make_moment_context(h, WalkType::A, QubitState::symmetric());
    for (int n = 1; n <= 30; ++n) EXPECT_NEAR(moment_closed_form(sym, n, 1), 0.0, 1e-12) << n;
    EXPECT_THROW(moment_closed_form(sym, 0, 1), ParamOutOfRange);
    EXPECT_THROW(
        moment_closed_form(make_moment_context(make_coin(1.0, 0.0, 0.0, 1.0), WalkType::A, QubitState::left()), 3, 1),
        CoinHasZeroEntry);
}

TEST(Moments, ClosedFormMatchesOracleWalk) {
    std::mt19937_64 rng(24);
    for (int i = 0; i < 10; ++i) {
        const UnitaryCoin c = random_coin(rng);
        const QubitState s = random_state(rng);
        const bool a_type = i % 2 == 0;
        const MomentContext ctx = make_moment_context(c, a_type ? WalkType::A : WalkType::G, s);
        for (int n = 1; n <= 25; ++n) {
            const auto dist = oracle::walk_distribution(entries(c), a_type, {s.alpha(), s.beta()}, n);
            for (int m = 1; m <= 4; ++m)
                EXPECT_NEAR(moment_closed_form(ctx, n, m), oracle::moment(dist, m), 1e-8)
                    << "n=" << n << " m=" << m;
        }
    }
}

TEST(Symmetry, Examples) {
    const UnitaryCoin h = hadamard_coin();
    EXPECT_TRUE(classify_symmetry(h, WalkType::A, QubitState::symmetric()));
    EXPECT_FALSE(classify_symmetry(h, WalkType::A, QubitState::right()));
    const QubitState plus(kS, kS);
    EXPECT_FALSE(classify_symmetry(h, WalkType::A, plus));
    EXPECT_NEAR(theta(h, WalkType::A, plus), 0.5, 1e-15);
    EXPECT_NEAR(mean(distribution(evolve(plus, h, WalkType::A, 1))), -1.0, 1e-15);
}

TEST(Symmetry, MembersAreMirrorSymmetric) {
    std::mt19937_64 rng(25);
    for (int i = 0; i < 10; ++i) {
        const UnitaryCoin c = random_coin(rng);
        const WalkType wt = i % 2 ? WalkType::A : WalkType::G;
        const QubitState s = balanced_state(c, wt, i % 3 == 0, 0.7 * i);
        ASSERT_TRUE(classify_symmetry(c, wt, s));
        AmplitudeField f = initial_field(s, wt);
        const PQRSBasis b = pqrs(c, wt);
        for (int n = 1; n <= 15; ++n) {
            f = step(f, b);
            const Distribution d = distribution(f);
            for (int k = 0; k <= n; ++k) EXPECT_NEAR(d.at(k), d.at(-k), 1e-12);
            EXPECT_NEAR(mean(d), 0.0, 1e-12);
        }
    }
}

TEST(Symmetry, NonMembersHaveNonzeroMean) {
    std::mt19937_64 rng(26);
    for (int i = 0; i < 20; ++i) {
        const UnitaryCoin c = random_coin(rng);
        const QubitState s = random_state(rng);
        const WalkType wt = i % 2 ? WalkType::A : WalkType::G;
        ASSERT_FALSE(classify_symmetry(c, wt, s));
        double worst = 0.0;
        AmplitudeField f = initial_field(s, wt);
        const PQRSBasis b = pqrs(c, wt);
        for (int n = 1; n <= 15; ++n) {
            f = step(f, b);
            worst = std::max(worst, std::abs(mean(distribution(f))));
        }
        EXPECT_GT(worst, 1e-6);
    }
}

// The binomial sums cancel from ~1e148 near k = n/2 at this size.
TEST(Moments, StableAtLargeN) {
    std::mt19937_64 rng(27);
    for (const UnitaryCoin& c : {hadamard_coin(), h_rho_coin(0.02), h_rho_coin(0.98), random_coin(rng)}) {
        for (WalkType wt : {WalkType::A, WalkType::G}) {
            const QubitState s = random_state(rng);
            const MomentContext ctx = make_moment_context(c, wt, s);
            for (int n : {200, 1000}) {
                const Distribution d = distribution(evolve(s, c, wt, n));
                for (int m = 1; m <= 4; ++m) {
                    const double want = empirical_moment(d, m);
                    EXPECT_NEAR(moment_closed_form(ctx, n, m), want, 1e-10 * std::max(1.0, std::abs(want)))
                        << "n=" << n << " m=" << m;
                }
            }
        }
    }
}
