#ifndef SEQBELL_OPTICS_H
#define SEQBELL_OPTICS_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seqbell/bell.h"
#include "seqbell/lhv.h"
#include "seqbell/measurement.h"
#include "seqbell/qcore.h"

// Basis map: on each side mode |1> is index 0 and mode |2> is index 1. The
// two-photon index is 2 * a + b.
namespace seqbell::optics {

/// Unitary on a set of named optical modes. Throws OutOfRange unless
/// U^dagger U = I within 1e-10.
class OpticalUnitary {
  public:
    OpticalUnitary(CMatrix matrix, std::vector<std::string> mode_labels);

    const CMatrix &matrix() const noexcept { return matrix_; }
    const std::vector<std::string> &mode_labels() const noexcept { return mode_labels_; }

  private:
    CMatrix matrix_;
    std::vector<std::string> mode_labels_;
};

/// [[sqrt T, i sqrt(1-T)], [i sqrt(1-T), sqrt T]].
OpticalUnitary beamsplitter(double transmittivity);

/// diag(e^{i phi}, 1).
OpticalUnitary phase_shifter(double phi);

/// phase(phi_out) BS(1/2) phase(phi_internal) BS(1/2) phase(phi_external).
/// phi_internal = 0 swaps the modes (mirror), phi_internal = pi passes them
/// through (transparent), each up to phases.
OpticalUnitary mz_unitary(double phi_internal, double phi_external = 0.0, double phi_output = 0.0);

struct ExampleStateParams {
    double alpha_sq;
    double p1;

    double beta_sq() const { return 1.0 - alpha_sq; }
    double p2() const { return 1.0 - p1; }
    /// (p1 - p2)^2 <= (alpha^2 - beta^2)^2.
    bool constraint_satisfied() const;
    /// Throws OutOfRange naming the field unless both lie in (0, 1).
    void validate() const;
};

/// alpha |2>|2''> + beta |1>|1''>.
PureState pdc_pair_state(double alpha_sq);

/// Sends side B of psi through the Mach-Zehnder mixer: transparent
/// (phi_internal = pi) with probability p1, mirror (phi_internal = 0) with
/// probability p2. Outer phases pi/2 make the transparent branch exactly the
/// identity.
DensityMatrix stochastic_mz_mix(const PureState &psi, double p1, double p2);

/// |psi_1> = alpha|22'> + beta|11'>, |psi_2> = alpha|21'> + beta|12'>.
PureState example_component(const ExampleStateParams &params, int which);

struct ExampleState {
    DensityMatrix rho;
    bool constraint_satisfied;
};

/// p1 |psi_1><psi_1| + p2 |psi_2><psi_2|.
ExampleState build_example_state(const ExampleStateParams &params);

/// Pre-selection beamsplitter acting on side A. The pass operator attenuates
/// the larger-amplitude mode so both components end up balanced.
struct FilterDesign {
    double transmittivity;  // (beta/alpha)^2, or (alpha/beta)^2 when role_swapped
    bool role_swapped;      // mode |1> filtered instead of |2>
    bool trivial;           // alpha == beta, no filtering
    CMatrix kraus;          // 2x2 pass operator
};

/// Throws FilterUndefined for alpha < beta unless allow_role_swap.
FilterDesign design_filter(const ExampleStateParams &params, bool allow_role_swap = false);

/// Pass operator obtained from the three-mode picture: embed {|1>, |2>} into
/// {|1>, |2>, |D>}, mix the filtered mode with |D> on a beamsplitter and keep
/// the no-click subspace.
CMatrix three_mode_pass_operator(double transmittivity, bool role_swapped);

/// Post-selected state from the three-mode picture, computed on the
/// 6-dimensional space (three modes on A, two on B).
DensityMatrix three_mode_filtered_state(const DensityMatrix &rho, double transmittivity, bool role_swapped);

/// p1 |Phi+><Phi+| + p2 |Psi+><Psi+|.
DensityMatrix filtered_state_closed_form(const ExampleStateParams &params);

enum class Verdict { HiddenNonlocality, DirectViolation, NoViolation };

std::string verdict_text(Verdict v);

struct FilterProtocolOptions {
    std::optional<ChshSettings> pre_settings;   // default: optimal for rho
    std::optional<ChshSettings> post_settings;  // default: optimal for rho'
    double tol = 1e-9;
    std::uint64_t seed = 0;
};

/// Local filters followed by a CHSH test on the coincidence subensemble.
struct FilterProtocolReport {
    DensityMatrix rho;
    MaxChsh pre;
    double pre_chsh;  // at pre.settings or the supplied settings
    LhvResult pre_lhv;
    double pass_probability;
    DensityMatrix rho_post;           // filter route: sequence engine + conditioning
    DensityMatrix rho_post_analytic;  // local_filter
    double route_discrepancy;         // max entrywise difference of the two
    MaxChsh post;
    double post_chsh;
    LhvResult post_lhv;
    Verdict verdict;
};

/// A missing filter operator means that side only registers coincidences.
FilterProtocolReport run_filter_protocol(const DensityMatrix &rho, const std::optional<CMatrix> &filter_a,
                                         const std::optional<CMatrix> &filter_b,
                                         const FilterProtocolOptions &options = {});

struct ProtocolReport {
    ExampleStateParams params;
    bool constraint_satisfied;
    FilterDesign filter;
    double analytic_pass_probability;  // 2 min(alpha^2, beta^2)
    DensityMatrix closed_form;
    double closed_form_error;   // rho' vs closed form
    double three_mode_error;    // three-mode post-selected state vs rho'
    double expected_post_chsh;  // 2 sqrt(1 + (p1 - p2)^2)
    FilterProtocolReport run;
};

struct PipelineOptions {
    FilterProtocolOptions protocol;
    bool allow_role_swap = false;
};

/// Full experiment: source, mixer, pre-selection filter on side A, CHSH test
/// on the coincidence subensemble and LHV checks before and after filtering.
/// Throws FilterUndefined (alpha < beta without role swap) and
/// DegenerateProtocol (p1 = p2 with a non-trivial filter).
ProtocolReport preselection_pipeline(const ExampleStateParams &params, const PipelineOptions &options = {});

}  // namespace seqbell::optics

#endif
