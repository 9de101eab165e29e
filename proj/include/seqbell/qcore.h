#ifndef SEQBELL_QCORE_H
#define SEQBELL_QCORE_H

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "seqbell/errors.h"

namespace seqbell {

using Complex = std::complex<double>;

/// Which factor of a bipartite Hilbert space H_A (x) H_B an object refers to.
enum class Side { A, B };

/// Kernel tolerances. The defaults are the project-wide constants; callers that
/// need looser or tighter checks pass their own copy.
struct Tolerances {
    double hermitian = 1e-12;     // entrywise |m - m^dagger|
    double trace = 1e-12;         // |Tr(rho) - 1|
    double psd = 1e-10;           // smallest admissible eigenvalue is -psd
    double psd_clamp = 1e-8;      // psd_sqrt clamps eigenvalues in [-psd_clamp, 0)
    double normalization = 1e-12; // |<psi|psi> - 1|
    double eig_hermitian = 1e-10; // symmetry check on hermitian_eig input
};

/// Dense row-major complex matrix. Small by design (dimensions up to ~16).
class CMatrix {
  public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols);
    CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(std::span<const Complex> diag);
    static CMatrix diagonal(std::initializer_list<Complex> diag);
    static CMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
    /// |u><v| for column vectors u, v.
    static CMatrix outer(std::span<const Complex> u, std::span<const Complex> v);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    std::span<const Complex> entries() const noexcept { return data_; }

    Complex operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    Complex &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    CMatrix adjoint() const;
    Complex trace() const;
    double max_abs() const;
    double frobenius_norm() const;
    bool all_finite() const;
    bool is_hermitian(double tol) const;
    /// (m + m^dagger) / 2.
    CMatrix hermitian_part() const;
    std::vector<Complex> column(std::size_t j) const;

    CMatrix &operator+=(const CMatrix &other);
    CMatrix &operator-=(const CMatrix &other);
    CMatrix &operator*=(Complex s);

    friend CMatrix operator+(CMatrix a, const CMatrix &b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix &b) { return a -= b; }
    friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
    friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
    friend CMatrix operator*(const CMatrix &a, const CMatrix &b);
    friend bool operator==(const CMatrix &a, const CMatrix &b) = default;

    std::string str(int precision = 6) const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// Largest entrywise modulus of a - b. Shapes must agree.
double max_abs_diff(const CMatrix &a, const CMatrix &b);

CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

/// Normalized state vector.
class PureState {
  public:
    /// Throws NotNormalized unless the Euclidean norm is 1 within tolerance.
    explicit PureState(std::vector<Complex> amplitudes, const Tolerances &tol = {});
    /// Rescales a nonzero vector to unit norm.
    static PureState normalized(std::vector<Complex> amplitudes);

    std::size_t dim() const noexcept { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    Complex operator[](std::size_t i) const { return amplitudes_[i]; }

  private:
    std::vector<Complex> amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite matrix. Always valid once
/// constructed.
class DensityMatrix {
  public:
    explicit DensityMatrix(CMatrix m, const Tolerances &tol = {});
    /// Symmetrizes and divides by the trace before validating. Used for
    /// post-measurement states where rounding breaks exact Hermiticity.
    static DensityMatrix from_unnormalized(const CMatrix &m, const Tolerances &tol = {});
    static DensityMatrix maximally_mixed(std::size_t dim);

    std::size_t dim() const noexcept { return matrix_.rows(); }
    const CMatrix &matrix() const noexcept { return matrix_; }
    Complex operator()(std::size_t i, std::size_t j) const { return matrix_(i, j); }

  private:
    CMatrix matrix_;
};

struct EigenDecomposition {
    std::vector<double> values;  // descending
    CMatrix vectors;             // column k pairs with values[k]
};

CMatrix kron(const CMatrix &a, const CMatrix &b);

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
EigenDecomposition hermitian_eig(const CMatrix &m, const Tolerances &tol = {});

/// Principal square root of a PSD matrix. Eigenvalues in [-psd_clamp, 0) are
/// clamped to zero; anything more negative throws NotPsd.
CMatrix psd_sqrt(const CMatrix &m, const Tolerances &tol = {});

/// Largest singular value, sqrt(lambda_max(m^dagger m)).
double operator_norm(const CMatrix &m);

DensityMatrix partial_trace(const DensityMatrix &rho, Side keep, std::size_t dim_a, std::size_t dim_b);

DensityMatrix density_from_pure(const PureState &psi);

struct WeightedState {
    double weight;
    DensityMatrix state;
};

/// Convex combination. Weights must be nonnegative and sum to 1 within 1e-12.
DensityMatrix mix(std::span<const WeightedState> components);

}  // namespace seqbell

#endif
