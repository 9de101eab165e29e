#ifndef SEQBELL_MEASUREMENT_H
#define SEQBELL_MEASUREMENT_H

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqbell/qcore.h"

namespace seqbell {

/// Completeness tolerance for sum_i V_i^dagger V_i = I.
inline constexpr double kCompletenessTol = 1e-10;
/// Branches at or below this probability carry no post-measurement state.
inline constexpr double kZeroProbability = 1e-14;

/// A labeled partition of unity {V_i}: outcome i has probability
/// Tr(V_i rho V_i^dagger) and leaves the state V_i rho V_i^dagger / p_i.
class GeneralizedMeasurement {
  public:
    /// Throws BadLabel, DimensionMismatch or IncompletePartition.
    GeneralizedMeasurement(std::vector<std::string> labels, std::vector<CMatrix> operators);

    /// Single outcome whose operator is the identity.
    static GeneralizedMeasurement trivial(std::size_t dim, std::string label = "1");

    std::size_t dim() const noexcept { return operators_.front().rows(); }
    std::size_t size() const noexcept { return operators_.size(); }
    const std::vector<std::string> &labels() const noexcept { return labels_; }
    const std::vector<CMatrix> &operators() const noexcept { return operators_; }
    const std::string &label(std::size_t i) const { return labels_.at(i); }
    const CMatrix &op(std::size_t i) const { return operators_.at(i); }
    /// Throws BadLabel when absent.
    std::size_t index_of(const std::string &label) const;

  private:
    std::vector<std::string> labels_;
    std::vector<CMatrix> operators_;
};

/// ||sum_i V_i^dagger V_i - I||_inf (entrywise).
double completeness_residual(std::span<const CMatrix> operators);

void validate_measurement(const std::vector<std::string> &labels, const std::vector<CMatrix> &operators,
                          double tol = kCompletenessTol);
void validate_measurement(const GeneralizedMeasurement &m, double tol = kCompletenessTol);

/// One projector per distinct eigenvalue (merged within 1e-9), labeled by the
/// eigenvalue, in descending eigenvalue order.
GeneralizedMeasurement projective_from_observable(const CMatrix &hermitian);

/// Result of one measurement outcome on a state.
struct Branch {
    double probability = 0.0;
    std::optional<DensityMatrix> state;  // absent when probability <= kZeroProbability

    /// Throws ZeroProbabilityBranch when there is no post-measurement state.
    const DensityMatrix &state_or_throw() const;
};

Branch apply_outcome(const DensityMatrix &rho, const CMatrix &v);

/// Two-sided filter (V (x) W) rho (V (x) W)^dagger, normalized.
Branch local_filter(const DensityMatrix &rho, const CMatrix &v, const CMatrix &w);

/// {pass: V/||V||, fail: sqrt(I - V~^dagger V~)}.
GeneralizedMeasurement filter_from_operator(const CMatrix &v);

/// Ordered local measurements on one subsystem.
class MeasurementSequence {
  public:
    explicit MeasurementSequence(std::vector<GeneralizedMeasurement> steps);
    MeasurementSequence(std::initializer_list<GeneralizedMeasurement> steps);

    std::size_t dim() const noexcept { return steps_.front().dim(); }
    std::size_t size() const noexcept { return steps_.size(); }
    const std::vector<GeneralizedMeasurement> &steps() const noexcept { return steps_; }
    const GeneralizedMeasurement &operator[](std::size_t i) const { return steps_.at(i); }

  private:
    std::vector<GeneralizedMeasurement> steps_;
};

struct OutcomeAxis {
    Side side;
    std::size_t step;  // position within that side's sequence
    std::vector<std::string> labels;
};

/// Probability table over outcome tuples. Axes are A-steps then B-steps
/// unless reduced by marginalize/conditional. Row-major with the last axis
/// fastest.
class JointDistribution {
  public:
    JointDistribution(std::vector<OutcomeAxis> axes, std::vector<double> probabilities);

    const std::vector<OutcomeAxis> &axes() const noexcept { return axes_; }
    std::size_t rank() const noexcept { return axes_.size(); }
    std::size_t size() const noexcept { return probabilities_.size(); }
    std::span<const double> probabilities() const noexcept { return probabilities_; }

    std::size_t flat_index(std::span<const std::size_t> outcome) const;
    std::vector<std::size_t> outcome_of(std::size_t flat) const;
    double at(std::span<const std::size_t> outcome) const { return probabilities_[flat_index(outcome)]; }
    double at(std::initializer_list<std::size_t> outcome) const {
        return at(std::span<const std::size_t>(outcome.begin(), outcome.size()));
    }
    /// Lookup by outcome labels, one per axis.
    double at_labels(std::span<const std::string> labels) const;
    std::size_t axis_label_index(std::size_t axis, const std::string &label) const;

  private:
    std::vector<OutcomeAxis> axes_;
    std::vector<double> probabilities_;
};

/// Joint outcome statistics of running seq_a on subsystem A and seq_b on B.
/// Each step acts as V (x) I or I (x) W, chained with apply_outcome.
JointDistribution sequence_joint(const DensityMatrix &rho, const MeasurementSequence &seq_a,
                                 const MeasurementSequence &seq_b);

/// Same table, applying the steps in an explicit interleaving. order must
/// contain seq_a.size() entries Side::A and seq_b.size() entries Side::B.
JointDistribution sequence_joint(const DensityMatrix &rho, const MeasurementSequence &seq_a,
                                 const MeasurementSequence &seq_b, std::span<const Side> order);

/// Sums out every axis not listed. Kept axes retain their relative order.
JointDistribution marginalize(const JointDistribution &j, std::span<const std::size_t> kept_axes);

struct AxisAssignment {
    std::size_t axis;
    std::string label;
};

/// P(rest | given) = P(rest, given) / P(given).
JointDistribution conditional(const JointDistribution &j, std::span<const AxisAssignment> given);

/// X = {A1, B1, a1, b1}: first-stage measurements and the selected outcomes.
struct SelectionContext {
    SelectionContext(GeneralizedMeasurement first_a, GeneralizedMeasurement first_b, std::string outcome_a,
                     std::string outcome_b);

    GeneralizedMeasurement first_a;
    GeneralizedMeasurement first_b;
    std::string outcome_a;
    std::string outcome_b;
};

/// The subensemble selected by ctx, with its selection probability.
Branch select(const DensityMatrix &rho, const SelectionContext &ctx);

/// Measurements following a fixed prefix, one alternative choice.
struct LaterSteps {
    std::vector<GeneralizedMeasurement> a;
    std::vector<GeneralizedMeasurement> b;
};

/// Largest absolute change of the prefix marginal P(prefix outcomes) across
/// the supplied later-step alternatives. Needs at least two alternatives.
double causality_check(const DensityMatrix &rho, const MeasurementSequence &prefix_a,
                       const MeasurementSequence &prefix_b, std::span<const LaterSteps> alternatives);

}  // namespace seqbell

#endif
