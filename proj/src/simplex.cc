#include "seqbell/simplex.h"

#include <cmath>
#include <limits>

#include "seqbell/errors.h"

namespace seqbell::lp {

namespace {

// Dense tableau over structural columns [0, n) and artificial columns
// [n, n + m), with the right-hand side in the last column. The reduced-cost
// row is kept alongside and updated by every pivot.
class Tableau {
  public:
    Tableau(const Problem &p)
        : m_(p.rows), n_(p.cols), width_(p.cols + p.rows + 1), t_(m_ * width_, 0.0), sign_(m_, 1.0), basis_(m_) {
        for (std::size_t i = 0; i < m_; ++i) {
            sign_[i] = p.b[i] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) at(i, j) = sign_[i] * p.coefficient(i, j);
            at(i, n_ + i) = 1.0;
            at(i, rhs()) = sign_[i] * p.b[i];
            basis_[i] = n_ + i;
        }
    }

    std::size_t rhs() const { return width_ - 1; }
    double &at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
    double at(std::size_t i, std::size_t j) const { return t_[i * width_ + j]; }

    // Installs reduced costs d_j = c_j - c_B B^-1 A_j for a cost vector over
    // all n + m columns.
    void price(const std::vector<double> &cost) {
        cost_ = cost;
        d_.assign(width_, 0.0);
        for (std::size_t j = 0; j < width_ - 1; ++j) d_[j] = cost[j];
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = cost[basis_[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) d_[j] -= cb * at(i, j);
        }
    }

    // Runs Bland's rule until optimal. Columns at or beyond `enter_limit`
    // never enter the basis.
    Status iterate(std::size_t enter_limit, const Options &opt, std::size_t &pivots) {
        while (true) {
            std::size_t enter = enter_limit;
            for (std::size_t j = 0; j < enter_limit; ++j) {
                if (d_[j] < -opt.cost_tol) {
                    enter = j;
                    break;
                }
            }
            if (enter == enter_limit) return Status::Optimal;

            std::size_t leave = m_;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = at(i, enter);
                if (a <= opt.pivot_tol) continue;
                const double ratio = std::max(at(i, rhs()), 0.0) / a;
                if (ratio < best_ratio - 1e-12 ||
                    (ratio <= best_ratio + 1e-12 && leave < m_ && basis_[i] < basis_[leave])) {
                    best_ratio = std::min(best_ratio, ratio);
                    leave = i;
                }
            }
            if (leave == m_) return Status::Unbounded;
            if (++pivots > opt.max_pivots) return Status::IterationLimit;
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        const double inv = 1.0 / at(row, col);
        for (std::size_t j = 0; j < width_; ++j) at(row, j) *= inv;
        at(row, col) = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row) continue;
            const double f = at(i, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) at(i, j) -= f * at(row, j);
            at(i, col) = 0.0;
        }
        const double f = d_[col];
        if (f != 0.0) {
            for (std::size_t j = 0; j < width_; ++j) d_[j] -= f * at(row, j);
            d_[col] = 0.0;
        }
        basis_[row] = col;
    }

    // Pivots zero-level artificials out wherever a structural entry allows.
    void drive_out_artificials(const Options &opt) {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            std::size_t best = n_;
            double best_abs = opt.pivot_tol;
            for (std::size_t j = 0; j < n_; ++j) {
                if (std::abs(at(i, j)) > best_abs) {
                    best_abs = std::abs(at(i, j));
                    best = j;
                }
            }
            if (best < n_) pivot(i, best);
        }
    }

    double objective() const { return -d_[rhs()]; }

    std::vector<double> solution() const {
        std::vector<double> x(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) x[basis_[i]] = std::max(at(i, rhs()), 0.0);
        }
        return x;
    }

    // y_i = c_{art i} - d_{art i}, mapped back through the row sign flips.
    std::vector<double> duals() const {
        std::vector<double> y(m_);
        for (std::size_t i = 0; i < m_; ++i) y[i] = sign_[i] * (cost_[n_ + i] - d_[n_ + i]);
        return y;
    }

  private:
    std::size_t m_;
    std::size_t n_;
    std::size_t width_;
    std::vector<double> t_;
    std::vector<double> sign_;
    std::vector<std::size_t> basis_;
    std::vector<double> cost_;
    std::vector<double> d_;
};

}  // namespace

Solution solve(const Problem &problem, const Options &options) {
    if (problem.a.size() != problem.rows * problem.cols || problem.b.size() != problem.rows ||
        (!problem.c.empty() && problem.c.size() != problem.cols)) {
        throw Error(ErrorCode::DimensionMismatch, "LP data does not match the declared shape");
    }
    const std::size_t n = problem.cols;
    const std::size_t m = problem.rows;
    Tableau tab(problem);
    Solution sol;

    std::vector<double> phase1(n + m, 0.0);
    for (std::size_t i = 0; i < m; ++i) phase1[n + i] = 1.0;
    tab.price(phase1);
    Status st = tab.iterate(n, options, sol.pivots);
    sol.infeasibility = tab.objective();
    sol.x = tab.solution();
    sol.duals = tab.duals();
    if (st != Status::Optimal) {
        sol.status = st;
        return sol;
    }
    if (sol.infeasibility > options.feasibility_tol) {
        sol.status = Status::Infeasible;
        return sol;
    }

    tab.drive_out_artificials(options);
    if (problem.c.empty()) {
        sol.status = Status::Optimal;
        sol.x = tab.solution();
        return sol;
    }

    std::vector<double> phase2(n + m, 0.0);
    for (std::size_t j = 0; j < n; ++j) phase2[j] = problem.c[j];
    tab.price(phase2);
    st = tab.iterate(n, options, sol.pivots);
    sol.status = st;
    sol.x = tab.solution();
    sol.objective = tab.objective();
    sol.duals = tab.duals();
    return sol;
}

}  // namespace seqbell::lp
