#include "seqbell/qcore.h"

#include <gtest/gtest.h>

#include "oracles.h"

using namespace seqbell;

TEST(CMatrix, ArithmeticAndAdjoint) {
    const Complex i(0.0, 1.0);
    const CMatrix a = CMatrix::from_rows({{1.0, i}, {2.0, 3.0}});
    const CMatrix b = CMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    EXPECT_EQ(a * b, CMatrix::from_rows({{i, 1.0}, {3.0, 2.0}}));
    EXPECT_EQ(a.adjoint(), CMatrix::from_rows({{1.0, 2.0}, {-i, 3.0}}));
    EXPECT_EQ(a.trace(), Complex(4.0, 0.0));
    EXPECT_EQ(a + b - b, a);
    EXPECT_DOUBLE_EQ((a * 2.0)(1, 1).real(), 6.0);
}

TEST(CMatrix, RejectsBadShapesAndNonFinite) {
    EXPECT_THROW(CMatrix(2, 2, std::vector<Complex>(3)), Error);
    try {
        CMatrix(1, 1, {Complex(std::nan(""), 0.0)});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NonFinite);
    }
    EXPECT_THROW(CMatrix(2, 3) * CMatrix(2, 3), Error);
}

TEST(CMatrix, KronMatchesExplicitFormula) {
    oracle::Rng rng(1);
    const CMatrix a = oracle::ginibre(2, 2, rng);
    const CMatrix b = oracle::ginibre(2, 2, rng);
    EXPECT_LT(max_abs_diff(kron(a, b), oracle::kron2(a, b)), 1e-15);
    EXPECT_EQ(kron(CMatrix::identity(2), CMatrix::identity(3)), CMatrix::identity(6));
}

TEST(PureState, NormalizationEnforced) {
    EXPECT_THROW(PureState({1.0, 1.0}), Error);
    const PureState s = PureState::normalized({3.0, 4.0});
    EXPECT_NEAR(s[0].real(), 0.6, 1e-15);
    EXPECT_NO_THROW(PureState({0.6, Complex(0.0, 0.8)}));
}

TEST(DensityMatrix, ValidatesInvariants) {
    auto code_of = [](const CMatrix &m) {
        try {
            DensityMatrix d(m);
        } catch (const Error &e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    EXPECT_EQ(code_of(CMatrix::from_rows({{0.5, 0.1}, {0.2, 0.5}})), ErrorCode::NotHermitian);
    EXPECT_EQ(code_of(CMatrix::from_rows({{0.6, 0.0}, {0.0, 0.6}})), ErrorCode::NotNormalized);
    EXPECT_EQ(code_of(CMatrix::from_rows({{1.2, 0.0}, {0.0, -0.2}})), ErrorCode::NotPsd);
    EXPECT_EQ(code_of(CMatrix(2, 3)), ErrorCode::DimensionMismatch);
    EXPECT_NO_THROW(DensityMatrix::maximally_mixed(4));
}

TEST(DensityMatrix, FromUnnormalizedRepairsRounding) {
    CMatrix m = CMatrix::from_rows({{2.0, 1e-14}, {0.0, 2.0}});
    const DensityMatrix d = DensityMatrix::from_unnormalized(m);
    EXPECT_NEAR(d.matrix().trace().real(), 1.0, 1e-15);
    EXPECT_TRUE(d.matrix().is_hermitian(0.0));
}

TEST(HermitianEig, KnownSpectrum) {
    const auto e = hermitian_eig(pauli_y());
    ASSERT_EQ(e.values.size(), 2u);
    EXPECT_NEAR(e.values[0], 1.0, 1e-14);
    EXPECT_NEAR(e.values[1], -1.0, 1e-14);
    const auto d = hermitian_eig(CMatrix::diagonal({0.1, 3.0, -2.0}));
    EXPECT_NEAR(d.values[0], 3.0, 1e-15);
    EXPECT_NEAR(d.values[2], -2.0, 1e-15);
}

TEST(HermitianEig, RandomReconstruction) {
    oracle::Rng rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 7;
        const CMatrix h = oracle::random_hermitian(n, rng);
        const auto e = hermitian_eig(h);
        CMatrix lam(n, n);
        for (std::size_t k = 0; k < n; ++k) lam(k, k) = e.values[k];
        EXPECT_LT(max_abs_diff(e.vectors * lam * e.vectors.adjoint(), h), 1e-10);
        EXPECT_LT(max_abs_diff(e.vectors.adjoint() * e.vectors, CMatrix::identity(n)), 1e-10);
        EXPECT_TRUE(std::is_sorted(e.values.rbegin(), e.values.rend()));
    }
}

TEST(HermitianEig, RejectsNonHermitian) {
    EXPECT_THROW(hermitian_eig(CMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}})), Error);
}

TEST(PsdSqrt, SquaresBackAndClamps) {
    oracle::Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const CMatrix g = oracle::ginibre(4, 2, rng);
        const CMatrix p = g * g.adjoint();
        const CMatrix r = psd_sqrt(p);
        EXPECT_LT(max_abs_diff(r * r, p), 1e-9);
        EXPECT_TRUE(r.is_hermitian(1e-10));
    }
    EXPECT_NO_THROW(psd_sqrt(CMatrix::diagonal({1.0, -1e-9})));
    EXPECT_THROW(psd_sqrt(CMatrix::diagonal({1.0, -1e-3})), Error);
}

TEST(OperatorNorm, MatchesSingularValue) {
    EXPECT_NEAR(operator_norm(CMatrix::diagonal({0.5, -2.0})), 2.0, 1e-14);
    EXPECT_NEAR(operator_norm(CMatrix::from_rows({{1.0, 1.0}, {0.0, 0.0}})), std::sqrt(2.0), 1e-14);
}

TEST(PartialTrace, ProductStateFactors) {
    oracle::Rng rng(4);
    const DensityMatrix a = oracle::random_density(2, rng);
    const DensityMatrix b = oracle::random_density(3, rng);
    const DensityMatrix ab(kron(a.matrix(), b.matrix()));
    EXPECT_LT(max_abs_diff(partial_trace(ab, Side::A, 2, 3).matrix(), a.matrix()), 1e-14);
    EXPECT_LT(max_abs_diff(partial_trace(ab, Side::B, 2, 3).matrix(), b.matrix()), 1e-14);
    EXPECT_THROW(partial_trace(ab, Side::A, 2, 2), Error);
}

TEST(PartialTrace, BellStateIsMaximallyMixed) {
    const DensityMatrix phi(oracle::bell_projector(0));
    EXPECT_LT(max_abs_diff(partial_trace(phi, Side::A, 2, 2).matrix(), CMatrix::identity(2) * 0.5), 1e-15);
}

TEST(Mix, WeightsChecked) {
    const DensityMatrix z0(CMatrix::diagonal({1.0, 0.0}));
    const DensityMatrix z1(CMatrix::diagonal({0.0, 1.0}));
    const std::vector<WeightedState> ok{{0.25, z0}, {0.75, z1}};
    EXPECT_LT(max_abs_diff(mix(ok).matrix(), CMatrix::diagonal({0.25, 0.75})), 1e-16);
    const std::vector<WeightedState> bad_sum{{0.5, z0}, {0.6, z1}};
    EXPECT_THROW(mix(bad_sum), Error);
    const std::vector<WeightedState> negative{{-0.5, z0}, {1.5, z1}};
    EXPECT_THROW(mix(negative), Error);
}
