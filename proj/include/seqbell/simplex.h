#ifndef SEQBELL_SIMPLEX_H
#define SEQBELL_SIMPLEX_H

#include <cstddef>
#include <vector>

namespace seqbell::lp {

/// Equality-form problem: minimize c.x subject to A x = b, x >= 0.
/// A is row-major with `rows` x `cols` entries. An empty c means pure
/// feasibility (phase 1 only).
struct Problem {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> c;

    double coefficient(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Solution {
    Status status = Status::IterationLimit;
    std::vector<double> x;
    /// Phase 1: minimal sum of artificial variables (L1 residual of A x = b).
    double infeasibility = 0.0;
    double objective = 0.0;
    /// Simplex multipliers y = c_B B^-1 for the original rows. After an
    /// infeasible phase 1 these are the phase-1 multipliers, which form a
    /// Farkas certificate: y.A_j <= 0 for every column and y.b > 0.
    std::vector<double> duals;
    std::size_t pivots = 0;
};

struct Options {
    /// Phase-1 optimum above this is reported as infeasible.
    double feasibility_tol = 1e-9;
    double pivot_tol = 1e-11;
    double cost_tol = 1e-11;
    std::size_t max_pivots = 100000;
};

/// Two-phase dense tableau simplex with Bland's anti-cycling rule.
Solution solve(const Problem &problem, const Options &options = {});

}  // namespace seqbell::lp

#endif
