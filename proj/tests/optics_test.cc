#include "seqbell/optics.h"

#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.h"

using namespace seqbell;
using namespace seqbell::optics;

namespace {

ErrorCode code_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    return ErrorCode::InvalidArgument;
}

// Correlation matrix through Pauli expectations, independent of bell.cc.
std::array<std::array<double, 3>, 3> pauli_correlations(const CMatrix &rho) {
    const auto s = oracle::paulis();
    std::array<std::array<double, 3>, 3> t{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[i][j] = (rho * oracle::kron2(s[i + 1], s[j + 1])).trace().real();
    return t;
}

// Max CHSH for a diagonal correlation matrix: two largest squared entries.
double diagonal_max_chsh(std::array<double, 3> d) {
    for (auto &v : d) v *= v;
    std::sort(d.begin(), d.end());
    return 2.0 * std::sqrt(d[1] + d[2]);
}

}  // namespace

TEST(Components, BeamsplitterAndPhase) {
    const auto bs = beamsplitter(0.25).matrix();
    EXPECT_NEAR(bs(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(bs(0, 1).imag(), std::sqrt(0.75), 1e-15);
    EXPECT_THROW(beamsplitter(1.5), Error);
    const auto ph = phase_shifter(oracle::kPi / 2).matrix();
    EXPECT_NEAR(ph(0, 0).imag(), 1.0, 1e-15);
    EXPECT_NEAR(ph(1, 1).real(), 1.0, 1e-15);
    EXPECT_THROW(OpticalUnitary(CMatrix::diagonal({1.0, 0.5}), {"1", "2"}), Error);
}

TEST(MachZehnder, MirrorAndTransparentSettings) {
    const Complex i(0.0, 1.0);
    EXPECT_LT(max_abs_diff(mz_unitary(0.0).matrix(), CMatrix::from_rows({{0.0, i}, {i, 0.0}})), 1e-15);
    EXPECT_LT(max_abs_diff(mz_unitary(oracle::kPi).matrix(), CMatrix::diagonal({-1.0, 1.0})), 1e-15);
    const double h = oracle::kPi / 2;
    EXPECT_LT(max_abs_diff(mz_unitary(oracle::kPi, h, h).matrix(), CMatrix::identity(2)), 1e-15);
    EXPECT_LT(max_abs_diff(mz_unitary(0.0, h, h).matrix(), CMatrix::from_rows({{0.0, -1.0}, {-1.0, 0.0}})), 1e-15);
}

TEST(MachZehnder, UnitaryForRandomPhases) {
    oracle::Rng rng(51);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int t = 0; t < 100; ++t) {
        const CMatrix m = mz_unitary(u(rng), u(rng), u(rng)).matrix();
        EXPECT_LT(max_abs_diff(m.adjoint() * m, CMatrix::identity(2)), 1e-12);
    }
}

TEST(ExampleState, SourceAndMixture) {
    const PureState src = pdc_pair_state(0.8);
    EXPECT_NEAR(src[0].real(), std::sqrt(0.2), 1e-15);
    EXPECT_NEAR(src[3].real(), std::sqrt(0.8), 1e-15);
    const ExampleStateParams params{0.8, 0.7};
    const DensityMatrix mixed = stochastic_mz_mix(src, 0.7, 0.3);
    EXPECT_LT(max_abs_diff(mixed.matrix(), build_example_state(params).rho.matrix()), 1e-12);
    EXPECT_EQ(code_of([&] { stochastic_mz_mix(src, 0.7, 0.4); }), ErrorCode::BadWeights);
    const PureState psi2 = example_component(params, 2);
    EXPECT_NEAR(std::abs(psi2[1]), std::sqrt(0.2), 1e-15);
    EXPECT_NEAR(std::abs(psi2[2]), std::sqrt(0.8), 1e-15);
}

TEST(ExampleState, CorrelationMatrix) {
    const auto t = pauli_correlations(build_example_state({0.8, 0.7}).rho.matrix());
    EXPECT_NEAR(t[0][0], 0.8, 1e-12);
    EXPECT_NEAR(t[1][1], -0.32, 1e-12);
    EXPECT_NEAR(t[2][2], 0.4, 1e-12);
    EXPECT_NEAR(t[0][1], 0.0, 1e-12);
}

TEST(ExampleState, ConstraintExamples) {
    EXPECT_TRUE((ExampleStateParams{0.8, 0.7}.constraint_satisfied()));
    EXPECT_FALSE((ExampleStateParams{0.5, 0.7}.constraint_satisfied()));
    EXPECT_TRUE((ExampleStateParams{0.8, 0.5}.constraint_satisfied()));
    EXPECT_EQ(code_of([] { ExampleStateParams{1.0, 0.5}.validate(); }), ErrorCode::OutOfRange);
    EXPECT_EQ(code_of([] { ExampleStateParams{0.5, 0.0}.validate(); }), ErrorCode::OutOfRange);
}

TEST(Filter, DesignAndThreeModePicture) {
    const FilterDesign f = design_filter({0.8, 0.7});
    EXPECT_NEAR(f.transmittivity, 0.25, 1e-15);
    EXPECT_FALSE(f.role_swapped);
    EXPECT_LT(max_abs_diff(f.kraus, CMatrix::diagonal({1.0, 0.5})), 1e-15);
    EXPECT_LT(max_abs_diff(three_mode_pass_operator(0.25, false), CMatrix::diagonal({1.0, 0.5})), 1e-15);
    EXPECT_LT(max_abs_diff(three_mode_pass_operator(0.25, true), CMatrix::diagonal({0.5, 1.0})), 1e-15);
    EXPECT_EQ(code_of([] { design_filter({0.3, 0.7}); }), ErrorCode::FilterUndefined);
    const FilterDesign s = design_filter({0.2, 0.7}, true);
    EXPECT_TRUE(s.role_swapped);
    EXPECT_NEAR(s.transmittivity, 0.25, 1e-15);
    EXPECT_TRUE(design_filter({0.5, 0.7}).trivial);
}

TEST(Pipeline, DefaultParameters) {
    const ProtocolReport r = preselection_pipeline({0.8, 0.7});
    EXPECT_TRUE(r.constraint_satisfied);
    EXPECT_NEAR(r.run.pre.value, 2.0 * std::sqrt(0.8), 1e-9);
    EXPECT_NEAR(r.run.pass_probability, 0.4, 1e-12);
    EXPECT_NEAR(r.analytic_pass_probability, 0.4, 1e-15);
    EXPECT_NEAR(r.run.post.value, 2.0 * std::sqrt(1.16), 1e-9);
    EXPECT_NEAR(r.expected_post_chsh, 2.0 * std::sqrt(1.16), 1e-15);
    EXPECT_LT(r.closed_form_error, 1e-12);
    EXPECT_LT(r.three_mode_error, 1e-12);
    EXPECT_LT(r.run.route_discrepancy, 1e-12);
    const CMatrix closed = oracle::bell_projector(0) * 0.7 + oracle::bell_projector(1) * 0.3;
    EXPECT_LT(max_abs_diff(r.run.rho_post.matrix(), closed), 1e-12);
    EXPECT_TRUE(r.run.pre_lhv.feasible);
    EXPECT_FALSE(r.run.post_lhv.feasible);
    ASSERT_TRUE(r.run.post_lhv.certificate.has_value());
    EXPECT_GT(r.run.post_lhv.certificate->violation(), 0.1);
    EXPECT_EQ(r.run.verdict, Verdict::HiddenNonlocality);
    EXPECT_EQ(verdict_text(r.run.verdict), "hidden nonlocality exhibited");
}

TEST(Pipeline, DegenerateAndUndefinedCases) {
    EXPECT_EQ(code_of([] { preselection_pipeline({0.8, 0.5}); }), ErrorCode::DegenerateProtocol);
    EXPECT_EQ(code_of([] { preselection_pipeline({0.3, 0.7}); }), ErrorCode::FilterUndefined);
    PipelineOptions swap;
    swap.allow_role_swap = true;
    const ProtocolReport r = preselection_pipeline({0.3, 0.7}, swap);
    EXPECT_TRUE(r.filter.role_swapped);
    EXPECT_NEAR(r.run.pass_probability, 0.6, 1e-12);
    EXPECT_NEAR(r.run.post.value, 2.0 * std::sqrt(1.16), 1e-9);
    EXPECT_LT(r.three_mode_error, 1e-12);
}

TEST(Pipeline, BalancedSourceNeedsNoFilter) {
    const ProtocolReport r = preselection_pipeline({0.5, 0.7});
    EXPECT_TRUE(r.filter.trivial);
    EXPECT_NEAR(r.run.pass_probability, 1.0, 1e-12);
    EXPECT_NEAR(r.run.pre.value, r.run.post.value, 1e-12);
    EXPECT_EQ(r.run.verdict, Verdict::DirectViolation);
    EXPECT_NO_THROW(preselection_pipeline({0.5, 0.5}));
}

TEST(Pipeline, GridProperties) {
    for (int i = 0; i < 9; ++i) {
        for (int j = 0; j < 9; ++j) {
            const double a = 0.55 + 0.05 * i;
            const double p = 0.05 + 0.1 * j + (j >= 5 ? 0.01 : 0.0);
            const ExampleStateParams params{a, p};
            const ProtocolReport r = preselection_pipeline(params);
            const double ab = 2.0 * std::sqrt(a * (1.0 - a));
            const double d = 2.0 * p - 1.0;
            EXPECT_NEAR(r.run.pre.value, diagonal_max_chsh({ab, ab * d, d}), 1e-9);
            EXPECT_NEAR(r.run.pass_probability, 2.0 * (1.0 - a), 1e-12);
            EXPECT_NEAR(r.run.post.value, 2.0 * std::sqrt(1.0 + d * d), 1e-9);
            EXPECT_LT(r.closed_form_error, 1e-12);
            EXPECT_LT(r.three_mode_error, 1e-12);
            if (params.constraint_satisfied()) {
                EXPECT_LE(r.run.pre.value, 2.0 + 1e-9);
                EXPECT_EQ(r.run.verdict, Verdict::HiddenNonlocality);
            }
        }
    }
}

TEST(RunFilterProtocol, CustomFilters) {
    const DensityMatrix mixed = DensityMatrix::maximally_mixed(4);
    const auto r = run_filter_protocol(mixed, CMatrix::diagonal({1.0, 0.3}), std::nullopt);
    EXPECT_EQ(r.verdict, Verdict::NoViolation);
    EXPECT_EQ(verdict_text(r.verdict), "no violation");
    const auto id = run_filter_protocol(build_example_state({0.8, 0.7}).rho, CMatrix::identity(2) * 3.0,
                                        CMatrix::identity(2));
    EXPECT_NEAR(id.pass_probability, 1.0, 1e-12);
    EXPECT_NEAR(id.pre.value, id.post.value, 1e-12);
    EXPECT_EQ(id.verdict, Verdict::NoViolation);
}
