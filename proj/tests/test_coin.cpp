#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qrw/coin.hpp"
#include "qrw/sampling.hpp"

using namespace qrw;

namespace {

const double kS = 1.0 / std::numbers::sqrt2;

oracle::Entries entries(const UnitaryCoin& c) { return {c.a(), c.b(), c.c(), c.d()}; }

oracle::Mat as_mat(const Matrix2& m) { return {m.e[0], m.e[1], m.e[2], m.e[3]}; }

const Label kLabels[] = {Label::P, Label::Q, Label::R, Label::S};

}  // namespace

TEST(MakeCoin, Hadamard) {
    const UnitaryCoin h = make_coin(kS, kS, kS, -kS);
    EXPECT_NEAR(std::abs(h.det() - Complex(-1.0)), 0.0, 1e-15);
    EXPECT_TRUE(h.abcd_nonzero());
}

TEST(MakeCoin, IdentityAcceptedWithZeroEntries) {
    const UnitaryCoin id = make_coin(1.0, 0.0, 0.0, 1.0);
    EXPECT_EQ(id.det(), Complex(1.0));
    EXPECT_FALSE(id.abcd_nonzero());
}

TEST(MakeCoin, RejectsNonOrthogonalRows) {
    try {
        make_coin(kS, kS, kS, kS);
        FAIL() << "accepted";
    } catch (const NotUnitary& e) {
        EXPECT_GT(e.residual(), 0.1);
    }
}

TEST(MakeCoin, DoesNotRenormalize) {
    const double eps = 1e-6;
    EXPECT_THROW(make_coin(kS + eps, kS, kS, -kS), NotUnitary);
}

TEST(MakeCoin, RejectsNonFinite) {
    EXPECT_THROW(make_coin(std::nan(""), 0.0, 0.0, 1.0), NonFinite);
    EXPECT_THROW(make_coin(INFINITY, 0.0, 0.0, 1.0), NonFinite);
}

TEST(MakeCoin, ReportsWorstResidualNearTolerance) {
    // Rows are unit length but not orthogonal: a conj(c) + b conj(d) = (1 - i)/2.
    try {
        make_coin(kS, kS, Complex(0.0, kS), Complex(0.0, -kS) * Complex(0.0, 1.0));
        FAIL() << "accepted";
    } catch (const NotUnitary& e) {
        EXPECT_NEAR(e.residual(), kS, 1e-12);
    }
}

TEST(NamedCoin, HRhoHalfIsHadamard) {
    EXPECT_LT(max_abs_diff(named_coin("h_rho", {0.5}).matrix(), hadamard_coin().matrix()), kUnitTol);
}

TEST(NamedCoin, UZeroIsHadamard) {
    EXPECT_LT(max_abs_diff(named_coin("u_eta_phi_psi", {0, 0, 0}).matrix(), hadamard_coin().matrix()), kUnitTol);
}

TEST(NamedCoin, Gudder) {
    const UnitaryCoin g = named_coin("gudder", {0.6});
    EXPECT_NEAR(std::abs(g.a() - Complex(0.6)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(g.b() - Complex(0.0, 0.8)), 0.0, 1e-15);
    EXPECT_LT(unitarity_residual(g.a(), g.b(), g.c(), g.d()), kUnitTol);
}

TEST(NamedCoin, ParameterRanges) {
    EXPECT_THROW(named_coin("h_rho", {1.5}), ParamOutOfRange);
    EXPECT_THROW(named_coin("h_rho", {-0.1}), ParamOutOfRange);
    EXPECT_THROW(named_coin("gudder", {1.0}), ParamOutOfRange);
    EXPECT_THROW(named_coin("gudder", {0.0}), ParamOutOfRange);
    EXPECT_THROW(named_coin("u_eta_phi_psi", {0.0, 1.0}), ParamOutOfRange);
    EXPECT_THROW(named_coin("nope", {}), ParamOutOfRange);
}

TEST(NamedCoin, HRhoSweep) {
    for (int i = 0; i <= 10; ++i) {
        const UnitaryCoin c = h_rho_coin(i / 10.0);
        EXPECT_LT(unitarity_residual(c.a(), c.b(), c.c(), c.d()), kUnitTol);
        EXPECT_EQ(c.abcd_nonzero(), i != 0 && i != 10) << "rho = " << i / 10.0;
    }
}

TEST(Pqrs, HadamardAType) {
    const PQRSBasis b = pqrs(hadamard_coin(), WalkType::A);
    EXPECT_LT(max_abs_diff(b.P, Matrix2{{kS, kS, 0.0, 0.0}}), 1e-15);
}

TEST(Pqrs, GudderGType) {
    const PQRSBasis b = pqrs(gudder_coin(0.6), WalkType::G);
    EXPECT_LT(max_abs_diff(b.P, Matrix2{{0.6, 0.0, Complex(0.0, 0.8), 0.0}}), 1e-15);
}

TEST(Pqrs, MatchesEntrywiseDefinitionsAndSumsToU) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        const UnitaryCoin c = random_coin(rng);
        for (bool a_type : {true, false}) {
            const PQRSBasis b = pqrs(c, a_type ? WalkType::A : WalkType::G);
            const auto e = entries(c);
            EXPECT_EQ(as_mat(b.P), oracle::p_matrix(e, a_type));
            EXPECT_EQ(as_mat(b.Q), oracle::q_matrix(e, a_type));
            EXPECT_EQ(as_mat(b.R), oracle::r_matrix(e, a_type));
            EXPECT_EQ(as_mat(b.S), oracle::s_matrix(e, a_type));
            EXPECT_LT(max_abs_diff(b.P + b.Q, c.matrix()), kUnitTol);
            EXPECT_LT(orthonormality_residual(b), kUnitTol);
        }
    }
}

TEST(Expand, IdentityCoefficients) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 10; ++i) {
        const UnitaryCoin c = random_coin(rng);
        for (WalkType wt : {WalkType::A, WalkType::G}) {
            const BasisCombo x = expand(Matrix2::identity(), pqrs(c, wt));
            EXPECT_LT(max_abs_diff(x, BasisCombo{std::conj(c.a()), std::conj(c.d()), std::conj(c.c()),
                                                 std::conj(c.b()), wt}),
                      kExpandTol);
        }
    }
}

TEST(Expand, BasisElementsAndProductExample) {
    const UnitaryCoin c = gudder_coin(0.6);
    const PQRSBasis b = pqrs(c, WalkType::A);
    EXPECT_LT(max_abs_diff(expand(b.P, b), BasisCombo{1.0, 0.0, 0.0, 0.0, WalkType::A}), kExpandTol);
    EXPECT_LT(max_abs_diff(expand(b.P * b.Q, b), BasisCombo{0.0, 0.0, c.b(), 0.0, WalkType::A}), kExpandTol);
}

TEST(Expand, RoundTripRandomMatrices) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    const PQRSBasis b = pqrs(random_coin(rng), WalkType::G);
    for (int i = 0; i < 100; ++i) {
        Matrix2 x;
        for (auto& e : x.e) e = {g(rng), g(rng)};
        EXPECT_LT(max_abs_diff(recombine(expand(x, b), b), x), kExpandTol);
    }
}

TEST(Expand, CoefficientsAreTraceInnerProducts) {
    std::mt19937_64 rng(4);
    const UnitaryCoin c = random_coin(rng);
    const PQRSBasis b = pqrs(c, WalkType::A);
    const Matrix2 x{{Complex(0.3, -1.0), 2.0, Complex(0.0, 0.5), -0.7}};
    const BasisCombo got = expand(x, b);
    const auto e = entries(c);
    const auto xm = as_mat(x);
    EXPECT_LT(std::abs(got.p - oracle::coefficient(oracle::p_matrix(e, true), xm)), 1e-15);
    EXPECT_LT(std::abs(got.s - oracle::coefficient(oracle::s_matrix(e, true), xm)), 1e-15);
}

TEST(BasisProduct, WorkedEntries) {
    const UnitaryCoin c = gudder_coin(0.6);
    auto pq = basis_product(Label::P, Label::Q, c);
    EXPECT_EQ(pq.label, Label::R);
    EXPECT_EQ(pq.scalar, c.b());
    auto qp = basis_product(Label::Q, Label::P, c);
    EXPECT_EQ(qp.label, Label::S);
    EXPECT_EQ(qp.scalar, c.c());
    auto sr = basis_product(Label::S, Label::R, c);
    EXPECT_EQ(sr.label, Label::Q);
    EXPECT_EQ(sr.scalar, c.a());
}

TEST(BasisProduct, TableAgreesWithMatrixProducts) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        const UnitaryCoin c = random_coin(rng);
        for (WalkType wt : {WalkType::A, WalkType::G}) {
            const PQRSBasis b = pqrs(c, wt);
            for (Label l : kLabels) {
                for (Label r : kLabels) {
                    const BasisProduct bp = basis_product(l, r, c);
                    const BasisCombo got = expand(b[l] * b[r], b);
                    for (Label k : kLabels) {
                        const Complex want = k == bp.label ? bp.scalar : Complex{};
                        EXPECT_LT(std::abs(got[k] - want), kExpandTol)
                            << to_char(l) << to_char(r) << " -> " << to_char(k);
                    }
                }
            }
        }
    }
}

TEST(QubitStateTest, Validation) {
    EXPECT_THROW(QubitState(1.0, 1.0), ParamOutOfRange);
    EXPECT_THROW(QubitState(std::nan(""), 0.0), NonFinite);
    const QubitState s = QubitState::symmetric();
    EXPECT_NEAR(std::norm(s.alpha()) + std::norm(s.beta()), 1.0, 1e-15);
    EXPECT_EQ(s.beta(), Complex(0.0, kS));
}

TEST(Grammar, Coins) {
    EXPECT_TRUE(is_hadamard(parse_coin("hadamard")));
    EXPECT_TRUE(is_hadamard(parse_coin("h_rho:0.5")));
    EXPECT_TRUE(is_hadamard(parse_coin("u:0,0,0")));
    EXPECT_NEAR(parse_coin("gudder:0.6").a().real(), 0.6, 1e-15);
    const UnitaryCoin raw = parse_coin("raw:0,0.70710678118654752,0.70710678118654752,0,0.70710678118654752,0,0,0.70710678118654752");
    EXPECT_NEAR(std::abs(raw.a() - Complex(0.0, kS)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(raw.b() - kS), 0.0, 1e-15);
    for (const char* bad : {"", "hadamard:1", "h_rho", "h_rho:", "h_rho:x", "h_rho:0.1,0.2", "u:1,2",
                            "raw:1,2,3", "raw:1,0,0,0,0,0,1,0,5", "walsh"})
        EXPECT_THROW(parse_coin(bad), ParseError) << bad;
    EXPECT_THROW(parse_coin("raw:1,0,1,0,1,0,1,0"), NotUnitary);
    EXPECT_THROW(parse_coin("h_rho:2"), ParamOutOfRange);
}

TEST(Grammar, States) {
    EXPECT_EQ(parse_state("L").alpha(), Complex(1.0));
    EXPECT_EQ(parse_state("R").beta(), Complex(1.0));
    EXPECT_EQ(parse_state("sym").beta(), Complex(0.0, kS));
    EXPECT_EQ(parse_state("raw:0,0,0,1").beta(), Complex(0.0, 1.0));
    for (const char* bad : {"", "l", "raw:1,0", "raw:a,b,c,d", "up"}) EXPECT_THROW(parse_state(bad), ParseError) << bad;
    EXPECT_THROW(parse_state("raw:1,0,1,0"), ParamOutOfRange);
}

TEST(Grammar, WalkType) {
    EXPECT_EQ(parse_walk_type("a"), WalkType::A);
    EXPECT_EQ(parse_walk_type("G"), WalkType::G);
    EXPECT_THROW(parse_walk_type("b"), ParseError);
}

TEST(Sampling, BalancedStatesZeroTheta) {
    std::mt19937_64 rng(6);
    for (int i = 0; i < 20; ++i) {
        const UnitaryCoin c = random_coin(rng);
        for (WalkType wt : {WalkType::A, WalkType::G}) {
            const QubitState s = balanced_state(c, wt, i % 2, 0.3 * i);
            const Complex al = s.alpha(), be = s.beta();
            const double th = wt == WalkType::A ? 2.0 * (c.a() * al * std::conj(c.b() * be)).real()
                                                : 2.0 * (c.a() * be * std::conj(c.c() * al)).real();
            EXPECT_NEAR(th, 0.0, 1e-14);
            EXPECT_NEAR(std::abs(al), std::abs(be), 1e-15);
        }
    }
}
