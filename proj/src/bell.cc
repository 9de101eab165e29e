#include "seqbell/bell.h"

#include <algorithm>
#include <cmath>
#include <random>

namespace seqbell {

namespace {

constexpr double kAchievementTol = 1e-6;
constexpr int kFallbackRestarts = 64;
constexpr double kFallbackTol = 1e-8;
constexpr double kPi = 3.14159265358979323846;

double norm3(const Vec3 &v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

Vec3 scaled(const Vec3 &v, double s) { return {v[0] * s, v[1] * s, v[2] * s}; }

Vec3 add(const Vec3 &a, const Vec3 &b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

Vec3 times(const CorrelationMatrix &t, const Vec3 &v) {
    Vec3 out{};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) out[i] += t.t[i][j] * v[j];
    }
    return out;
}

// Any unit vector orthogonal to v (v need not be normalized).
Vec3 orthogonal_unit(const Vec3 &v) {
    std::size_t axis = 0;
    for (std::size_t i = 1; i < 3; ++i) {
        if (std::abs(v[i]) < std::abs(v[axis])) axis = i;
    }
    Vec3 trial{};
    trial[axis] = 1.0;
    Vec3 c{v[1] * trial[2] - v[2] * trial[1], v[2] * trial[0] - v[0] * trial[2], v[0] * trial[1] - v[1] * trial[0]};
    return scaled(c, 1.0 / norm3(c));
}

// Real unit vector from column k of a real symmetric eigenbasis, which the
// Hermitian solver returns up to a complex phase.
Vec3 real_eigenvector(const CMatrix &vectors, std::size_t k) {
    std::size_t big = 0;
    for (std::size_t i = 1; i < 3; ++i) {
        if (std::abs(vectors(i, k)) > std::abs(vectors(big, k))) big = i;
    }
    const Complex phase = std::conj(vectors(big, k)) / std::abs(vectors(big, k));
    Vec3 v{};
    for (std::size_t i = 0; i < 3; ++i) v[i] = (vectors(i, k) * phase).real();
    return scaled(v, 1.0 / norm3(v));
}

void require_two_qubit(const DensityMatrix &rho) {
    if (rho.dim() != 4) {
        throw Error(ErrorCode::DimensionMismatch, "two-qubit state required, got dimension " + std::to_string(rho.dim()));
    }
}

const std::array<CMatrix, 3> &paulis() {
    static const std::array<CMatrix, 3> p{pauli_x(), pauli_y(), pauli_z()};
    return p;
}

double chsh_from_correlations(const CorrelationMatrix &t, const ChshSettings &s) {
    return t.correlator(s.a.direction(), s.b.direction()) + t.correlator(s.a.direction(), s.b_prime.direction()) +
           t.correlator(s.a_prime.direction(), s.b.direction()) -
           t.correlator(s.a_prime.direction(), s.b_prime.direction());
}

ChshSettings settings_from_angles(const std::array<double, 8> &x) {
    return {BlochObservable::from_angles(x[0], x[1]), BlochObservable::from_angles(x[2], x[3]),
            BlochObservable::from_angles(x[4], x[5]), BlochObservable::from_angles(x[6], x[7])};
}

// Coordinate ascent over the 8 polar/azimuthal angles with a shrinking step.
ChshSettings numerical_max(const CorrelationMatrix &t, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> theta(0.0, kPi);
    std::uniform_real_distribution<double> phi(0.0, 2.0 * kPi);
    std::array<double, 8> best_x{};
    double best = -1e300;
    for (int restart = 0; restart < kFallbackRestarts; ++restart) {
        std::array<double, 8> x{};
        for (std::size_t k = 0; k < 8; k += 2) {
            x[k] = theta(rng);
            x[k + 1] = phi(rng);
        }
        double value = chsh_from_correlations(t, settings_from_angles(x));
        for (double step = 0.5; step > kFallbackTol; step *= 0.5) {
            bool improved = true;
            while (improved) {
                improved = false;
                for (std::size_t k = 0; k < 8; ++k) {
                    for (double dir : {1.0, -1.0}) {
                        auto y = x;
                        y[k] += dir * step;
                        const double v = chsh_from_correlations(t, settings_from_angles(y));
                        if (v > value + 1e-15) {
                            x = y;
                            value = v;
                            improved = true;
                        }
                    }
                }
            }
        }
        if (value > best) {
            best = value;
            best_x = x;
        }
    }
    return settings_from_angles(best_x);
}

}  // namespace

BlochObservable::BlochObservable(const Vec3 &direction) : direction_(direction) {
    if (std::abs(norm3(direction_) - 1.0) > 1e-12) {
        throw Error(ErrorCode::OutOfRange, "Bloch direction must be a unit vector");
    }
}

BlochObservable BlochObservable::along(const Vec3 &v) {
    const double n = norm3(v);
    if (!(n > 0.0)) {
        throw Error(ErrorCode::OutOfRange, "Bloch direction must be nonzero");
    }
    return BlochObservable(scaled(v, 1.0 / n));
}

BlochObservable BlochObservable::from_angles(double theta, double phi) {
    return along({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
}

CMatrix BlochObservable::matrix() const {
    const auto &p = paulis();
    return p[0] * direction_[0] + p[1] * direction_[1] + p[2] * direction_[2];
}

GeneralizedMeasurement BlochObservable::measurement() const {
    const CMatrix id = CMatrix::identity(2);
    const CMatrix n = matrix();
    return GeneralizedMeasurement({"+1", "-1"}, {(id + n) * 0.5, (id - n) * 0.5});
}

double CorrelationMatrix::correlator(const Vec3 &a, const Vec3 &b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) s += a[i] * t[i][j] * b[j];
    }
    return s;
}

double expectation(const DensityMatrix &rho, const BlochObservable &a, const BlochObservable &b) {
    require_two_qubit(rho);
    return (rho.matrix() * kron(a.matrix(), b.matrix())).trace().real();
}

CorrelationMatrix correlation_matrix(const DensityMatrix &rho) {
    require_two_qubit(rho);
    const auto &p = paulis();
    CorrelationMatrix t;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) t.t[i][j] = (rho.matrix() * kron(p[i], p[j])).trace().real();
    }
    return t;
}

double chsh_value(const DensityMatrix &rho, const ChshSettings &s) {
    return expectation(rho, s.a, s.b) + expectation(rho, s.a, s.b_prime) + expectation(rho, s.a_prime, s.b) -
           expectation(rho, s.a_prime, s.b_prime);
}

MaxChsh max_chsh(const DensityMatrix &rho, std::uint64_t seed) {
    const CorrelationMatrix t = correlation_matrix(rho);

    // M = T^T T, real symmetric; reuse the Hermitian solver.
    CMatrix m(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < 3; ++k) s += t.t[k][i] * t.t[k][j];
            m(i, j) = s;
        }
    }
    const auto eig = hermitian_eig(m);
    const double t1 = std::sqrt(std::max(eig.values[0], 0.0));
    const double t2 = std::sqrt(std::max(eig.values[1], 0.0));
    const double value = 2.0 * std::sqrt(t1 * t1 + t2 * t2);

    const Vec3 e1 = real_eigenvector(eig.vectors, 0);
    const Vec3 e2 = real_eigenvector(eig.vectors, 1);

    // b, b' = cos(th) e1 +- sin(th) e2 with tan(th) = t2/t1; a and a' along
    // T e1 and T e2. Then CHSH = 2 (t1 cos th + t2 sin th).
    const double th = std::atan2(t2, t1);
    const Vec3 te1 = times(t, e1);
    const Vec3 te2 = times(t, e2);
    const Vec3 a_dir = norm3(te1) > 1e-12 ? te1 : orthogonal_unit(e1);
    const Vec3 a_prime_dir = norm3(te2) > 1e-12 ? te2 : orthogonal_unit(a_dir);

    ChshSettings settings{BlochObservable::along(a_dir), BlochObservable::along(a_prime_dir),
                          BlochObservable::along(add(scaled(e1, std::cos(th)), scaled(e2, std::sin(th)))),
                          BlochObservable::along(add(scaled(e1, std::cos(th)), scaled(e2, -std::sin(th))))};

    if (std::abs(chsh_value(rho, settings) - value) <= kAchievementTol) {
        return {value, settings, false};
    }
    ChshSettings found = numerical_max(t, seed);
    return {value, found, true};
}

DensityMatrix tomographic_conditional_state(const DensityMatrix &rho, const SelectionContext &ctx) {
    require_two_qubit(rho);
    if (ctx.first_a.dim() != 2 || ctx.first_b.dim() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "selection measurements must act on qubits");
    }
    // Index 0 is the trivial measurement (sigma_0 = I), 1..3 are Pauli x, y, z.
    std::array<GeneralizedMeasurement, 4> settings{
        GeneralizedMeasurement::trivial(2, "+1"), BlochObservable({1, 0, 0}).measurement(),
        BlochObservable({0, 1, 0}).measurement(), BlochObservable({0, 0, 1}).measurement()};
    const std::array<CMatrix, 4> sigma{CMatrix::identity(2), pauli_x(), pauli_y(), pauli_z()};

    CMatrix acc(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            auto joint = sequence_joint(rho, MeasurementSequence{ctx.first_a, settings[i]},
                                        MeasurementSequence{ctx.first_b, settings[j]});
            const std::array<AxisAssignment, 2> given{AxisAssignment{0, ctx.outcome_a},
                                                      AxisAssignment{2, ctx.outcome_b}};
            auto cond = conditional(joint, given);
            double e = 0.0;
            for (std::size_t f = 0; f < cond.size(); ++f) {
                auto o = cond.outcome_of(f);
                const double sa = cond.axes()[0].labels[o[0]] == "-1" ? -1.0 : 1.0;
                const double sb = cond.axes()[1].labels[o[1]] == "-1" ? -1.0 : 1.0;
                e += sa * sb * cond.probabilities()[f];
            }
            acc += kron(sigma[i], sigma[j]) * (0.25 * e);
        }
    }
    return DensityMatrix::from_unnormalized(acc);
}

}  // namespace seqbell
