#include "seqbell/lhv.h"

#include <gtest/gtest.h>

#include "oracles.h"
#include "seqbell/bell.h"

using namespace seqbell;

namespace {

BehaviorTable table2222(std::vector<double> p) { return BehaviorTable(2, 2, 2, 2, std::move(p)); }

ErrorCode code_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    return ErrorCode::InvalidArgument;
}

std::vector<GeneralizedMeasurement> random_settings(std::size_t k, oracle::Rng &rng) {
    std::vector<GeneralizedMeasurement> out;
    std::uniform_real_distribution<double> u(0.0, 2 * oracle::kPi);
    for (std::size_t i = 0; i < k; ++i) out.push_back(BlochObservable::from_angles(u(rng), u(rng)).measurement());
    return out;
}

}  // namespace

TEST(BehaviorTable, Validation) {
    EXPECT_EQ(code_of([] { table2222(std::vector<double>(15, 0.25)); }), ErrorCode::DimensionMismatch);
    EXPECT_EQ(code_of([] { table2222(std::vector<double>(16, 0.3)); }), ErrorCode::BadWeights);
    std::vector<double> neg(16, 0.25);
    neg[0] = -0.25;
    neg[1] = 0.75;
    EXPECT_EQ(code_of([&] { table2222(neg); }), ErrorCode::BadWeights);
    const auto pr = table2222(oracle::pr_box());
    EXPECT_NEAR(pr.correlator(0, 0), 1.0, 1e-15);
    EXPECT_NEAR(pr.correlator(1, 1), -1.0, 1e-15);
    EXPECT_NEAR(pr.marginal_a(1, 0, 1), 0.5, 1e-15);
}

TEST(EnumerateStrategies, CountAndOrder) {
    const auto s = enumerate_strategies(2, 2, 2, 2);
    ASSERT_EQ(s.size(), 16u);
    EXPECT_EQ(s[0].response_a, (std::vector<std::size_t>{0, 0}));
    EXPECT_EQ(s[1].response_b, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(s[4].response_a, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(enumerate_strategies(2, 2, 3, 3).size(), 81u);
    EXPECT_EQ(code_of([] { enumerate_strategies(10, 10, 2, 2); }), ErrorCode::ScenarioTooLarge);
}

TEST(LhvFeasible, UniformAndDeterministicAreLocal) {
    const auto r = lhv_feasible(table2222(std::vector<double>(16, 0.25)));
    EXPECT_TRUE(r.feasible);
    ASSERT_TRUE(r.model.has_value());
    EXPECT_LT(r.residual, 1e-12);
    const auto back = r.model->expand(2, 2, {"0", "1"}, {"0", "1"});
    for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(back.probabilities()[i], 0.25, 1e-12);
    for (int k = 0; k < 16; ++k) EXPECT_TRUE(lhv_feasible(table2222(oracle::deterministic_box(k))).feasible);
}

TEST(LhvFeasible, PrBoxCertificate) {
    const auto r = lhv_feasible(table2222(oracle::pr_box()));
    EXPECT_FALSE(r.feasible);
    ASSERT_TRUE(r.certificate.has_value());
    EXPECT_NEAR(r.certificate->value, 4.0, 1e-9);
    EXPECT_NEAR(r.certificate->local_bound, 2.0, 1e-9);
    // The bound is checked independently of the library's enumeration.
    EXPECT_NEAR(oracle::local_max(r.certificate->coefficients, 2, 2, 2, 2), r.certificate->local_bound, 1e-9);
}

TEST(LhvFeasible, CertificatesHoldOnRandomNonlocalTables) {
    oracle::Rng rng(41);
    int nonlocal = 0;
    for (int t = 0; t < 60; ++t) {
        const auto p = oracle::random_no_signalling(rng);
        const auto r = lhv_feasible(table2222(p));
        if (r.feasible) continue;
        ++nonlocal;
        ASSERT_TRUE(r.certificate.has_value());
        EXPECT_GT(r.certificate->violation(), 1e-9);
        EXPECT_LE(oracle::local_max(r.certificate->coefficients, 2, 2, 2, 2), r.certificate->local_bound + 1e-9);
    }
    EXPECT_GT(nonlocal, 5);
}

TEST(LhvFeasible, SignallingTableIsInfeasible) {
    std::vector<double> p(16, 0.0);
    // A's outcome copies B's setting.
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) p[((x * 2 + y) * 2 + y) * 2 + 0] = 1.0;
    const auto t = table2222(p);
    EXPECT_FALSE(is_no_signalling(t).ok);
    EXPECT_NEAR(is_no_signalling(t).max_deviation, 1.0, 1e-15);
    const auto r = lhv_feasible(t);
    EXPECT_FALSE(r.feasible);
    ASSERT_TRUE(r.certificate.has_value());
    EXPECT_GT(r.certificate->violation(), 0.0);
}

TEST(LhvFeasible, ThreeOutcomeScenario) {
    // Mixture of two deterministic 3-outcome strategies.
    std::vector<double> p(36, 0.0);
    BehaviorTable shape(2, 2, 3, 3, std::vector<double>(36, 1.0 / 9.0));
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            p[shape.index(x, y, x, 2)] += 0.5;
            p[shape.index(x, y, 2, y)] += 0.5;
        }
    const auto r = lhv_feasible(BehaviorTable(2, 2, 3, 3, p));
    EXPECT_TRUE(r.feasible);
    EXPECT_LT(r.residual, 1e-12);
}

TEST(ChshOfBehavior, MatchesOracle) {
    oracle::Rng rng(42);
    for (int t = 0; t < 50; ++t) {
        const auto p = oracle::random_no_signalling(rng);
        EXPECT_NEAR(chsh_of_behavior(table2222(p)), oracle::chsh_of(p), 1e-13);
    }
    EXPECT_NEAR(chsh_of_behavior(table2222(oracle::pr_box(5))), 4.0, 1e-15);
    EXPECT_THROW(chsh_of_behavior(BehaviorTable(2, 2, 3, 3, std::vector<double>(36, 1.0 / 9.0))), Error);
}

TEST(BehaviorFromQuantum, QuantumCorrelatorsAgree) {
    oracle::Rng rng(43);
    const DensityMatrix rho = oracle::random_density(4, rng);
    const auto a = random_settings(2, rng);
    const auto b = random_settings(3, rng);
    const auto t = behavior_from_quantum(rho, a, b);
    EXPECT_EQ(t.settings_b(), 3u);
    EXPECT_TRUE(is_no_signalling(t).ok);
    for (std::size_t x = 0; x < 2; ++x) {
        for (std::size_t y = 0; y < 3; ++y) {
            const CMatrix obs = kron(a[x].op(0) - a[x].op(1), b[y].op(0) - b[y].op(1));
            EXPECT_NEAR(t.correlator(x, y), (rho.matrix() * obs).trace().real(), 1e-13);
        }
    }
}

TEST(BehaviorFromQuantum, MaximallyEntangledIsNonlocal) {
    const DensityMatrix phi(oracle::bell_projector(0));
    const MaxChsh m = max_chsh(phi);
    const std::vector<GeneralizedMeasurement> a{m.settings.a.measurement(), m.settings.a_prime.measurement()};
    const std::vector<GeneralizedMeasurement> b{m.settings.b.measurement(), m.settings.b_prime.measurement()};
    const auto t = behavior_from_quantum(phi, a, b);
    EXPECT_NEAR(chsh_of_behavior(t), 2.0 * std::sqrt(2.0), 1e-9);
    const auto r = lhv_feasible(t);
    EXPECT_FALSE(r.feasible);
    EXPECT_GT(r.certificate->violation(), 0.8);
}

TEST(SeparableLhvModel, ReproducesAndClosesUnderPreselection) {
    oracle::Rng rng(44);
    for (int t = 0; t < 5; ++t) {
        std::vector<SeparableComponent> comps;
        for (int k = 0; k < 3; ++k) {
            comps.push_back({1.0 / 3.0, oracle::random_density(2, rng), oracle::random_density(2, rng)});
        }
        const SequentialProtocol proto{oracle::random_measurement(2, 2, rng, "f"), oracle::random_measurement(2, 2, rng, "g"),
                                       random_settings(2, rng), random_settings(2, rng)};
        const auto rep = separable_lhv_model(comps, proto);
        EXPECT_LT(rep.reproduction_error, 1e-12);
        EXPECT_TRUE(rep.all_conditionals_feasible);
        EXPECT_EQ(rep.conditionals.size(), 4u);
        for (const auto &c : rep.conditionals) {
            EXPECT_TRUE(c.lp_feasible);
            EXPECT_LT(c.model_error, 1e-12);
        }
        double total = 0.0;
        for (double w : rep.model.weights) total += w;
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
    const std::vector<SeparableComponent> bad{{0.5, DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(2)}};
    const SequentialProtocol proto{GeneralizedMeasurement::trivial(2), GeneralizedMeasurement::trivial(2),
                                   random_settings(2, rng), random_settings(2, rng)};
    EXPECT_EQ(code_of([&] { separable_lhv_model(bad, proto); }), ErrorCode::BadWeights);
}

TEST(LoopholeDemo, PostSelectionFakesMaximalViolation) {
    const auto rep = loophole_demo();
    EXPECT_EQ(rep.post_selected_chsh, 4.0);
    for (double r : rep.coincidence_rate) EXPECT_EQ(r, 0.25);
    EXPECT_TRUE(rep.full_behavior_feasible);
    EXPECT_LE(rep.forced_chsh, 2.0);
    EXPECT_FALSE(lhv_feasible(rep.post_selected).feasible);
    EXPECT_TRUE(lhv_feasible(rep.forced_outcomes).feasible);
}
