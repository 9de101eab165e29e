#include "seqbell/qcore.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace seqbell {

namespace {

constexpr int kMaxJacobiSweeps = 100;
constexpr double kJacobiOffDiagonalTol = 1e-13;

void require_square(const CMatrix &m, const char *what) {
    if (!m.is_square()) {
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + " requires a square matrix, got " +
                                                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw Error(ErrorCode::DimensionMismatch, "matrix entry count " + std::to_string(data_.size()) +
                                                      " does not match shape " + std::to_string(rows_) + "x" +
                                                      std::to_string(cols_));
    }
    if (!all_finite()) {
        throw Error(ErrorCode::NonFinite, "matrix contains NaN or Inf");
    }
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> diag) {
    CMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

CMatrix CMatrix::diagonal(std::initializer_list<Complex> diag) {
    return diagonal(std::span<const Complex>(diag.begin(), diag.size()));
}

CMatrix CMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<Complex> entries;
    entries.reserve(r * c);
    for (const auto &row : rows) {
        if (row.size() != c) {
            throw Error(ErrorCode::DimensionMismatch, "ragged matrix rows");
        }
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return CMatrix(r, c, std::move(entries));
}

CMatrix CMatrix::outer(std::span<const Complex> u, std::span<const Complex> v) {
    CMatrix m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
    }
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    }
    return out;
}

Complex CMatrix::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

double CMatrix::max_abs() const {
    double m = 0.0;
    for (const auto &z : data_) m = std::max(m, std::abs(z));
    return m;
}

double CMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto &z : data_) s += std::norm(z);
    return std::sqrt(s);
}

bool CMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const Complex &z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

bool CMatrix::is_hermitian(double tol) const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = i; j < cols_; ++j) {
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
        }
    }
    return true;
}

CMatrix CMatrix::hermitian_part() const {
    CMatrix out = *this + adjoint();
    out *= 0.5;
    return out;
}

std::vector<Complex> CMatrix::column(std::size_t j) const {
    std::vector<Complex> col(rows_);
    for (std::size_t i = 0; i < rows_; ++i) col[i] = (*this)(i, j);
    return col;
}

CMatrix &CMatrix::operator+=(const CMatrix &other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw Error(ErrorCode::DimensionMismatch, "matrix sum shape mismatch");
    }
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

CMatrix &CMatrix::operator-=(const CMatrix &other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw Error(ErrorCode::DimensionMismatch, "matrix difference shape mismatch");
    }
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

CMatrix &CMatrix::operator*=(Complex s) {
    for (auto &z : data_) z *= s;
    return *this;
}

CMatrix operator*(const CMatrix &a, const CMatrix &b) {
    if (a.cols_ != b.rows_) {
        throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch: " + std::to_string(a.rows_) + "x" +
                                                      std::to_string(a.cols_) + " * " + std::to_string(b.rows_) +
                                                      "x" + std::to_string(b.cols_));
    }
    CMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        for (std::size_t k = 0; k < a.cols_; ++k) {
            Complex aik = a(i, k);
            if (aik == Complex(0.0)) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

std::string CMatrix::str(int precision) const {
    std::ostringstream os;
    os.precision(precision);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j) os << "  ";
            os << (*this)(i, j);
        }
        os << "\n";
    }
    return os.str();
}

double max_abs_diff(const CMatrix &a, const CMatrix &b) { return (a - b).max_abs(); }

CMatrix pauli_x() { return CMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }
CMatrix pauli_y() { return CMatrix::from_rows({{0.0, Complex(0, -1)}, {Complex(0, 1), 0.0}}); }
CMatrix pauli_z() { return CMatrix::diagonal({1.0, -1.0}); }

PureState::PureState(std::vector<Complex> amplitudes, const Tolerances &tol) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.empty()) {
        throw Error(ErrorCode::DimensionMismatch, "pure state needs at least one amplitude");
    }
    double n2 = 0.0;
    for (const auto &z : amplitudes_) n2 += std::norm(z);
    if (!std::isfinite(n2)) {
        throw Error(ErrorCode::NonFinite, "pure state amplitudes are not finite");
    }
    if (std::abs(std::sqrt(n2) - 1.0) > tol.normalization) {
        throw Error(ErrorCode::NotNormalized, "state norm " + std::to_string(std::sqrt(n2)) + " differs from 1");
    }
}

PureState PureState::normalized(std::vector<Complex> amplitudes) {
    double n2 = 0.0;
    for (const auto &z : amplitudes) n2 += std::norm(z);
    if (!(n2 > 0.0)) {
        throw Error(ErrorCode::NotNormalized, "cannot normalize the zero vector");
    }
    double inv = 1.0 / std::sqrt(n2);
    for (auto &z : amplitudes) z *= inv;
    return PureState(std::move(amplitudes));
}

DensityMatrix::DensityMatrix(CMatrix m, const Tolerances &tol) : matrix_(std::move(m)) {
    require_square(matrix_, "density matrix");
    if (matrix_.rows() == 0) {
        throw Error(ErrorCode::DimensionMismatch, "density matrix must be nonempty");
    }
    if (!matrix_.all_finite()) {
        throw Error(ErrorCode::NonFinite, "density matrix contains NaN or Inf");
    }
    if (!matrix_.is_hermitian(tol.hermitian)) {
        throw Error(ErrorCode::NotHermitian, "density matrix is not Hermitian");
    }
    Complex tr = matrix_.trace();
    if (std::abs(tr - 1.0) > tol.trace) {
        throw Error(ErrorCode::NotNormalized, "density matrix trace is " + std::to_string(tr.real()));
    }
    auto eig = hermitian_eig(matrix_, tol);
    if (eig.values.back() < -tol.psd) {
        throw Error(ErrorCode::NotPsd, "density matrix has eigenvalue " + std::to_string(eig.values.back()));
    }
}

DensityMatrix DensityMatrix::from_unnormalized(const CMatrix &m, const Tolerances &tol) {
    CMatrix h = m.hermitian_part();
    double tr = h.trace().real();
    if (!(tr > 0.0)) {
        throw Error(ErrorCode::NotNormalized, "cannot normalize an operator with nonpositive trace");
    }
    h *= 1.0 / tr;
    // Chained Kraus updates leave eigenvalues slightly below zero; clamp the
    // ones within psd_clamp and renormalize.
    auto eig = hermitian_eig(h, tol);
    if (eig.values.back() < -tol.psd && eig.values.back() >= -tol.psd_clamp) {
        const std::size_t n = h.rows();
        CMatrix repaired(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            const double lambda = std::max(eig.values[k], 0.0);
            if (lambda == 0.0) continue;
            auto col = eig.vectors.column(k);
            repaired += CMatrix::outer(col, col) * lambda;
        }
        repaired = repaired.hermitian_part();
        repaired *= 1.0 / repaired.trace().real();
        h = std::move(repaired);
    }
    return DensityMatrix(std::move(h), tol);
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    CMatrix m = CMatrix::identity(dim);
    m *= 1.0 / static_cast<double>(dim);
    return DensityMatrix(std::move(m));
}

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            Complex aij = a(i, j);
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

EigenDecomposition hermitian_eig(const CMatrix &m, const Tolerances &tol) {
    require_square(m, "hermitian_eig");
    if (!m.is_hermitian(tol.eig_hermitian)) {
        throw Error(ErrorCode::NotHermitian, "hermitian_eig input is not Hermitian");
    }
    const std::size_t n = m.rows();
    CMatrix a = m.hermitian_part();
    CMatrix v = CMatrix::identity(n);
    const double scale = std::max(1.0, a.frobenius_norm());

    auto off_diagonal_mass = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) s += std::norm(a(i, j));
            }
        }
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
        if (off_diagonal_mass() < kJacobiOffDiagonalTol * scale) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double r = std::abs(apq);
                if (r == 0.0) continue;
                // Remove the phase of a_pq, then apply the real symmetric
                // rotation. J = diag(1, conj(phase)) * [[c, s], [-s, c]] on (p, q).
                const Complex phase = apq / r;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex jpp = c;
                const Complex jpq = s;
                const Complex jqp = -s * std::conj(phase);
                const Complex jqq = c * std::conj(phase);

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = CMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

CMatrix psd_sqrt(const CMatrix &m, const Tolerances &tol) {
    auto eig = hermitian_eig(m, tol);
    const std::size_t n = m.rows();
    if (n > 0 && eig.values.back() < -tol.psd_clamp) {
        throw Error(ErrorCode::NotPsd, "psd_sqrt input has eigenvalue " + std::to_string(eig.values.back()));
    }
    CMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double root = std::sqrt(std::max(eig.values[k], 0.0));
        if (root == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const Complex vi = eig.vectors(i, k) * root;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * std::conj(eig.vectors(j, k));
        }
    }
    return out.hermitian_part();
}

double operator_norm(const CMatrix &m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    auto eig = hermitian_eig(m.adjoint() * m);
    return std::sqrt(std::max(eig.values.front(), 0.0));
}

DensityMatrix partial_trace(const DensityMatrix &rho, Side keep, std::size_t dim_a, std::size_t dim_b) {
    if (rho.dim() != dim_a * dim_b) {
        throw Error(ErrorCode::DimensionMismatch, "partial_trace: state dimension " + std::to_string(rho.dim()) +
                                                      " != " + std::to_string(dim_a) + "*" + std::to_string(dim_b));
    }
    const std::size_t kept = keep == Side::A ? dim_a : dim_b;
    CMatrix out(kept, kept);
    for (std::size_t i = 0; i < kept; ++i) {
        for (std::size_t j = 0; j < kept; ++j) {
            Complex s = 0.0;
            if (keep == Side::A) {
                for (std::size_t k = 0; k < dim_b; ++k) s += rho(i * dim_b + k, j * dim_b + k);
            } else {
                for (std::size_t k = 0; k < dim_a; ++k) s += rho(k * dim_b + i, k * dim_b + j);
            }
            out(i, j) = s;
        }
    }
    return DensityMatrix::from_unnormalized(out);
}

DensityMatrix density_from_pure(const PureState &psi) {
    return DensityMatrix::from_unnormalized(CMatrix::outer(psi.amplitudes(), psi.amplitudes()));
}

DensityMatrix mix(std::span<const WeightedState> components) {
    if (components.empty()) {
        throw Error(ErrorCode::BadWeights, "mixture needs at least one component");
    }
    const std::size_t dim = components.front().state.dim();
    double total = 0.0;
    CMatrix acc(dim, dim);
    for (const auto &c : components) {
        if (!(c.weight >= 0.0)) {
            throw Error(ErrorCode::BadWeights, "negative mixture weight " + std::to_string(c.weight));
        }
        if (c.state.dim() != dim) {
            throw Error(ErrorCode::DimensionMismatch, "mixture components have different dimensions");
        }
        total += c.weight;
        acc += c.state.matrix() * c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw Error(ErrorCode::BadWeights, "mixture weights sum to " + std::to_string(total));
    }
    return DensityMatrix::from_unnormalized(acc);
}

}  // namespace seqbell
