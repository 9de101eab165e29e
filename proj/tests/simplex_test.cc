#include "seqbell/simplex.h"

#include <gtest/gtest.h>

#include <random>

using namespace seqbell;

TEST(Simplex, SmallOptimum) {
    // min -x - y  s.t.  x + 2y + s1 = 4,  3x + y + s2 = 6.
    lp::Problem p;
    p.rows = 2;
    p.cols = 4;
    p.a = {1, 2, 1, 0, 3, 1, 0, 1};
    p.b = {4, 6};
    p.c = {-1, -1, 0, 0};
    const auto s = lp::solve(p);
    ASSERT_EQ(s.status, lp::Status::Optimal);
    EXPECT_NEAR(s.x[0], 1.6, 1e-12);
    EXPECT_NEAR(s.x[1], 1.2, 1e-12);
    EXPECT_NEAR(s.objective, -2.8, 1e-12);
    // Strong duality: y.b equals the optimum.
    EXPECT_NEAR(s.duals[0] * 4 + s.duals[1] * 6, -2.8, 1e-12);
}

TEST(Simplex, InfeasibleGivesFarkasVector) {
    // x1 + x2 = 1 and x1 + x2 = 2 with x >= 0.
    lp::Problem p;
    p.rows = 2;
    p.cols = 2;
    p.a = {1, 1, 1, 1};
    p.b = {1, 2};
    const auto s = lp::solve(p);
    ASSERT_EQ(s.status, lp::Status::Infeasible);
    EXPECT_NEAR(s.infeasibility, 1.0, 1e-12);
    for (std::size_t j = 0; j < 2; ++j) EXPECT_LE(s.duals[0] * p.a[j] + s.duals[1] * p.a[2 + j], 1e-12);
    EXPECT_GT(s.duals[0] * p.b[0] + s.duals[1] * p.b[1], 0.0);
}

TEST(Simplex, NegativeRightHandSide) {
    // -x = -3.
    lp::Problem p{1, 1, {-1}, {-3}, {1}};
    const auto s = lp::solve(p);
    ASSERT_EQ(s.status, lp::Status::Optimal);
    EXPECT_NEAR(s.x[0], 3.0, 1e-12);
}

TEST(Simplex, Unbounded) {
    // min -x  s.t.  x - y = 0.
    lp::Problem p{1, 2, {1, -1}, {0}, {-1, 0}};
    EXPECT_EQ(lp::solve(p).status, lp::Status::Unbounded);
}

TEST(Simplex, RedundantRowsAreHandled) {
    lp::Problem p{3, 2, {1, 1, 2, 2, 1, 0}, {1, 2, 0.25}, {1, 2}};
    const auto s = lp::solve(p);
    ASSERT_EQ(s.status, lp::Status::Optimal);
    EXPECT_NEAR(s.x[0], 0.25, 1e-12);
    EXPECT_NEAR(s.x[1], 0.75, 1e-12);
}

TEST(Simplex, DegenerateCyclingExample) {
    // Beale's example, which cycles under the textbook largest-coefficient rule.
    lp::Problem p;
    p.rows = 3;
    p.cols = 7;
    p.a = {0.25, -8, -1, 9, 1, 0, 0, 0.5, -12, -0.5, 3, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1};
    p.b = {0, 0, 1};
    p.c = {-0.75, 20, -0.5, 6, 0, 0, 0};
    const auto s = lp::solve(p);
    ASSERT_EQ(s.status, lp::Status::Optimal);
    EXPECT_NEAR(s.objective, -1.25, 1e-12);
}

TEST(Simplex, ShapeMismatchThrows) {
    lp::Problem p{2, 2, {1, 2, 3}, {1, 1}, {}};
    EXPECT_THROW(lp::solve(p), std::exception);
}

TEST(Simplex, RandomFeasibleSystemsAreSolved) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const std::size_t m = 3 + t % 4;
        const std::size_t n = m + 4;
        lp::Problem p;
        p.rows = m;
        p.cols = n;
        p.a.resize(m * n);
        for (auto &v : p.a) v = u(rng) - 0.3;
        std::vector<double> x0(n);
        for (auto &v : x0) v = u(rng);
        p.b.assign(m, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) p.b[i] += p.a[i * n + j] * x0[j];
        const auto s = lp::solve(p);
        ASSERT_EQ(s.status, lp::Status::Optimal);
        for (std::size_t i = 0; i < m; ++i) {
            double r = -p.b[i];
            for (std::size_t j = 0; j < n; ++j) r += p.a[i * n + j] * s.x[j];
            EXPECT_NEAR(r, 0.0, 1e-9);
        }
    }
}
