#ifndef SEQBELL_LHV_H
#define SEQBELL_LHV_H

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqbell/measurement.h"
#include "seqbell/qcore.h"

namespace seqbell {

/// Upper bound on the number of deterministic strategies an LP may enumerate.
inline constexpr std::size_t kMaxStrategies = 1000000;

/// P(a,b|x,y) over finite settings x, y and outcomes a, b. Stored with
/// index ((x * settings_b + y) * outcomes_a + a) * outcomes_b + b.
class BehaviorTable {
  public:
    /// Throws BadWeights unless every (x, y) block is a probability
    /// distribution within 1e-10.
    BehaviorTable(std::size_t settings_a, std::size_t settings_b, std::vector<std::string> outcomes_a,
                  std::vector<std::string> outcomes_b, std::vector<double> p);
    /// Outcomes labeled "0", "1", ...
    BehaviorTable(std::size_t settings_a, std::size_t settings_b, std::size_t outcomes_a, std::size_t outcomes_b,
                  std::vector<double> p);

    std::size_t settings_a() const noexcept { return settings_a_; }
    std::size_t settings_b() const noexcept { return settings_b_; }
    std::size_t outcomes_a() const noexcept { return outcomes_a_.size(); }
    std::size_t outcomes_b() const noexcept { return outcomes_b_.size(); }
    const std::vector<std::string> &outcome_labels_a() const noexcept { return outcomes_a_; }
    const std::vector<std::string> &outcome_labels_b() const noexcept { return outcomes_b_; }
    std::span<const double> probabilities() const noexcept { return p_; }

    std::size_t index(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
        return ((x * settings_b_ + y) * outcomes_a() + a) * outcomes_b() + b;
    }
    double operator()(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
        return p_[index(x, y, a, b)];
    }
    /// P_A(a|x,y) and P_B(b|x,y).
    double marginal_a(std::size_t x, std::size_t y, std::size_t a) const;
    double marginal_b(std::size_t x, std::size_t y, std::size_t b) const;

    /// Two-outcome correlator E(x,y) with outcome index 0 valued +1 and 1 valued -1.
    double correlator(std::size_t x, std::size_t y) const;

  private:
    std::size_t settings_a_;
    std::size_t settings_b_;
    std::vector<std::string> outcomes_a_;
    std::vector<std::string> outcomes_b_;
    std::vector<double> p_;
};

/// One hidden state: a fixed outcome for every setting on each side.
struct DeterministicStrategy {
    std::vector<std::size_t> response_a;  // setting -> outcome index
    std::vector<std::size_t> response_b;
};

/// All deterministic strategies of a scenario in lexicographic order
/// (response_a as the leading digits, setting 0 most significant).
std::vector<DeterministicStrategy> enumerate_strategies(std::size_t settings_a, std::size_t settings_b,
                                                        std::size_t outcomes_a, std::size_t outcomes_b);

/// Finite mixture of deterministic local strategies.
struct LhvModel {
    std::vector<DeterministicStrategy> strategies;
    std::vector<double> weights;

    /// Throws BadWeights unless weights are >= 0 and sum to 1 within 1e-10.
    void validate() const;
    BehaviorTable expand(std::size_t settings_a, std::size_t settings_b, std::vector<std::string> outcomes_a,
                         std::vector<std::string> outcomes_b) const;
};

/// Linear functional sum c(a,b|x,y) P(a,b|x,y) with the same layout as the
/// table it was derived from. Every local behavior scores <= local_bound.
struct BellFunctional {
    std::vector<double> coefficients;
    double local_bound = 0.0;  // max over deterministic strategies
    double value = 0.0;        // on the table it certifies

    double evaluate(const BehaviorTable &t) const;
    double violation() const { return value - local_bound; }
};

struct LhvResult {
    bool feasible = false;
    std::optional<LhvModel> model;              // when feasible, nonzero weights only
    double residual = 0.0;                      // ||sum w D - t||_inf of the best LP point
    std::optional<BellFunctional> certificate;  // when infeasible
};

/// Single-step statistics P(a,b|x,y) = sequence_joint(rho, {A_x}, {B_y}).
/// All measurements on one side must share their outcome labels.
BehaviorTable behavior_from_quantum(const DensityMatrix &rho, std::span<const GeneralizedMeasurement> a_settings,
                                    std::span<const GeneralizedMeasurement> b_settings);

/// Behavior of the subensemble selected by ctx: for each setting pair the
/// two-step sequences {A1, A2_x} and {B1, B2_y} are run and conditioned on
/// the selected first-step outcomes.
BehaviorTable conditional_behavior(const DensityMatrix &rho, const SelectionContext &ctx,
                                   std::span<const GeneralizedMeasurement> a_settings,
                                   std::span<const GeneralizedMeasurement> b_settings);

struct NoSignallingReport {
    bool ok;
    double max_deviation;
};

NoSignallingReport is_no_signalling(const BehaviorTable &t, double tol = 1e-10);

/// Decides whether t is a mixture of deterministic local strategies.
/// Feasible iff the phase-1 LP point reproduces t within tol (infinity
/// norm). Infeasible results carry a Bell functional read from the simplex
/// dual and rescaled so that its local range is [-2, 2].
LhvResult lhv_feasible(const BehaviorTable &t, double tol = 1e-9);

/// Maximum over the eight CHSH expressions of the table's correlators.
/// Requires two settings and two outcomes per side (WrongScenario otherwise).
double chsh_of_behavior(const BehaviorTable &t);

/// Product component of a separable state.
struct SeparableComponent {
    double weight;
    DensityMatrix rho_a;
    DensityMatrix rho_b;
};

/// Two-stage protocol: a fixed first measurement per side followed by one of
/// several second-stage settings.
struct SequentialProtocol {
    GeneralizedMeasurement first_a;
    GeneralizedMeasurement first_b;
    std::vector<GeneralizedMeasurement> second_a;
    std::vector<GeneralizedMeasurement> second_b;
};

/// Hidden state of a sequential local model: the component index and the
/// full response table of each side (first outcome plus a second outcome for
/// every second-stage setting).
struct SequentialHiddenState {
    std::size_t component;
    std::size_t first_a;
    std::vector<std::size_t> second_a;  // per A setting
    std::size_t first_b;
    std::vector<std::size_t> second_b;  // per B setting
};

struct SequentialLhvModel {
    std::vector<SequentialHiddenState> states;
    std::vector<double> weights;
};

struct ConditionalCheck {
    std::string outcome_a;
    std::string outcome_b;
    double probability;   // P(a1, b1)
    bool lp_feasible;     // lhv_feasible on the quantum conditional behavior
    double model_error;   // the model's own conditional vs. the quantum one
};

struct SeparableModelReport {
    SequentialLhvModel model;
    double reproduction_error;  // vs. sequence_joint, max over settings and tuples
    std::vector<ConditionalCheck> conditionals;
    bool all_conditionals_feasible;
};

/// Explicit local model for a separable state under a sequential protocol,
/// verified against the quantum sequence engine. Every subensemble selected
/// by the first stage is checked for LHV feasibility.
SeparableModelReport separable_lhv_model(std::span<const SeparableComponent> components,
                                         const SequentialProtocol &protocol);

/// Local strategy that may decline to register a particle.
struct RejectionStrategy {
    static constexpr int kNoDetect = -1;
    std::vector<int> response_a;  // setting -> outcome index or kNoDetect
    std::vector<int> response_b;
};

struct WeightedRejectionStrategy {
    double weight;
    RejectionStrategy strategy;
};

struct LoopholeReport {
    std::vector<WeightedRejectionStrategy> strategies;
    BehaviorTable full_behavior;          // outcomes {+1, -1, none}; local by construction
    bool full_behavior_feasible;
    BehaviorTable post_selected;          // conditioned on coincidence
    double post_selected_chsh;
    std::vector<double> coincidence_rate; // index x * 2 + y
    BehaviorTable forced_outcomes;        // no-detect replaced by +1
    double forced_chsh;
};

/// Classic four-strategy detection-loophole mixture: each strategy registers
/// only under one targeted setting pair, so coincidences are post-selected
/// onto a PR-box-like behavior.
LoopholeReport loophole_demo();

}  // namespace seqbell

#endif
