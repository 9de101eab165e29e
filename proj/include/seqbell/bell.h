#ifndef SEQBELL_BELL_H
#define SEQBELL_BELL_H

#include <array>
#include <cstdint>

#include "seqbell/measurement.h"
#include "seqbell/qcore.h"

namespace seqbell {

using Vec3 = std::array<double, 3>;

/// Dichotomic observable n . sigma with a unit Bloch direction n.
class BlochObservable {
  public:
    /// Throws OutOfRange unless |n| = 1 within 1e-12.
    explicit BlochObservable(const Vec3 &direction);
    /// Rescales a nonzero vector to unit length.
    static BlochObservable along(const Vec3 &v);
    /// (sin t cos p, sin t sin p, cos t).
    static BlochObservable from_angles(double theta, double phi);

    const Vec3 &direction() const noexcept { return direction_; }
    CMatrix matrix() const;
    /// Projectors (I + n.sigma)/2 and (I - n.sigma)/2, labeled "+1", "-1".
    GeneralizedMeasurement measurement() const;

  private:
    Vec3 direction_;
};

struct ChshSettings {
    BlochObservable a;
    BlochObservable a_prime;
    BlochObservable b;
    BlochObservable b_prime;
};

/// T_ij = Tr(rho sigma_i (x) sigma_j).
struct CorrelationMatrix {
    std::array<Vec3, 3> t{};

    double operator()(std::size_t i, std::size_t j) const { return t[i][j]; }
    /// a^T T b.
    double correlator(const Vec3 &a, const Vec3 &b) const;
};

/// Tr(rho (a.sigma) (x) (b.sigma)) for a two-qubit state.
double expectation(const DensityMatrix &rho, const BlochObservable &a, const BlochObservable &b);

CorrelationMatrix correlation_matrix(const DensityMatrix &rho);

/// E(a,b) + E(a,b') + E(a',b) - E(a',b').
double chsh_value(const DensityMatrix &rho, const ChshSettings &s);

struct MaxChsh {
    double value;           // 2 sqrt(t1^2 + t2^2)
    ChshSettings settings;  // achieves value within 1e-6
    bool used_fallback;     // numerical search replaced the analytic settings
};

/// Maximal CHSH value of a two-qubit state with explicit optimal settings.
/// seed only drives the numerical fallback.
MaxChsh max_chsh(const DensityMatrix &rho, std::uint64_t seed = 0);

/// Rebuilds a two-qubit state from Pauli-pair statistics of the subensemble
/// selected by ctx. Every expectation is obtained by running the selection
/// step followed by a Pauli measurement through sequence_joint and
/// conditioning on the selected outcomes.
DensityMatrix tomographic_conditional_state(const DensityMatrix &rho, const SelectionContext &ctx);

}  // namespace seqbell

#endif
