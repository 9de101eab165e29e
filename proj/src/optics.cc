#include "seqbell/optics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace seqbell::optics {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kUnitaryTol = 1e-10;
constexpr double kBalanceTol = 1e-12;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void require_unit_interval_open(const char *name, double v) {
    if (!(v > 0.0 && v < 1.0)) {
        throw Error(ErrorCode::OutOfRange, std::string(name) + " = " + fmt(v) + " outside (0, 1)");
    }
}

GeneralizedMeasurement first_stage(const std::optional<CMatrix> &op) {
    if (!op) return GeneralizedMeasurement::trivial(2, "pass");
    if (op->rows() != 2 || op->cols() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "filter operators must be 2x2");
    }
    // A filter proportional to a unitary passes everything.
    const double norm = operator_norm(*op);
    if (norm > 0.0 && max_abs_diff(op->adjoint() * *op * (1.0 / (norm * norm)), CMatrix::identity(2)) < kBalanceTol) {
        return GeneralizedMeasurement::trivial(2, "pass");
    }
    return filter_from_operator(*op);
}

std::vector<GeneralizedMeasurement> side_a(const ChshSettings &s) { return {s.a.measurement(), s.a_prime.measurement()}; }

std::vector<GeneralizedMeasurement> side_b(const ChshSettings &s) { return {s.b.measurement(), s.b_prime.measurement()}; }

// Modes {|1>, |2>, |D>}: the beamsplitter couples the filtered mode to |D>.
OpticalUnitary three_mode_unitary(double transmittivity, bool role_swapped) {
    const std::size_t filtered = role_swapped ? 0 : 1;
    constexpr std::size_t detector = 2;
    const CMatrix bs = beamsplitter(transmittivity).matrix();
    CMatrix u = CMatrix::identity(3);
    u(filtered, filtered) = bs(0, 0);
    u(filtered, detector) = bs(0, 1);
    u(detector, filtered) = bs(1, 0);
    u(detector, detector) = bs(1, 1);
    return OpticalUnitary(std::move(u), {"1", "2", "D"});
}

CMatrix two_into_three() {
    CMatrix embed(3, 2);
    embed(0, 0) = 1.0;
    embed(1, 1) = 1.0;
    return embed;
}

}  // namespace

OpticalUnitary::OpticalUnitary(CMatrix matrix, std::vector<std::string> mode_labels)
    : matrix_(std::move(matrix)), mode_labels_(std::move(mode_labels)) {
    if (!matrix_.is_square() || mode_labels_.size() != matrix_.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "optical unitary needs one label per mode");
    }
    const double residual = max_abs_diff(matrix_.adjoint() * matrix_, CMatrix::identity(matrix_.rows()));
    if (!(residual <= kUnitaryTol)) {
        throw Error(ErrorCode::OutOfRange, "matrix is not unitary, residual " + fmt(residual));
    }
}

OpticalUnitary beamsplitter(double transmittivity) {
    if (!(transmittivity >= 0.0 && transmittivity <= 1.0)) {
        throw Error(ErrorCode::OutOfRange, "transmittivity = " + fmt(transmittivity) + " outside [0, 1]");
    }
    const double t = std::sqrt(transmittivity);
    const Complex r(0.0, std::sqrt(1.0 - transmittivity));
    return OpticalUnitary(CMatrix::from_rows({{t, r}, {r, t}}), {"in0", "in1"});
}

OpticalUnitary phase_shifter(double phi) {
    return OpticalUnitary(CMatrix::diagonal({std::polar(1.0, phi), 1.0}), {"0", "1"});
}

OpticalUnitary mz_unitary(double phi_internal, double phi_external, double phi_output) {
    const CMatrix bs = beamsplitter(0.5).matrix();
    CMatrix u = phase_shifter(phi_output).matrix() * bs * phase_shifter(phi_internal).matrix() * bs *
                phase_shifter(phi_external).matrix();
    return OpticalUnitary(std::move(u), {"1", "2"});
}

// T = diag(2ab, 2ab (p2 - p1), p1 - p2). Since 4a^2 b^2 + (a^2 - b^2)^2 = 1,
// this bound gives 4a^2 b^2 + (p1 - p2)^2 <= 1, so max CHSH <= 2.
bool ExampleStateParams::constraint_satisfied() const {
    const double dp = p1 - p2();
    const double da = alpha_sq - beta_sq();
    return dp * dp <= da * da + 1e-15;
}

void ExampleStateParams::validate() const {
    require_unit_interval_open("alpha_sq", alpha_sq);
    require_unit_interval_open("p1", p1);
}

PureState pdc_pair_state(double alpha_sq) {
    require_unit_interval_open("alpha_sq", alpha_sq);
    const double alpha = std::sqrt(alpha_sq);
    const double beta = std::sqrt(1.0 - alpha_sq);
    return PureState::normalized({beta, 0.0, 0.0, alpha});
}

DensityMatrix stochastic_mz_mix(const PureState &psi, double p1, double p2) {
    if (psi.dim() != 4) {
        throw Error(ErrorCode::DimensionMismatch, "mixer acts on a two-photon state of dimension 4");
    }
    if (!(p1 >= 0.0 && p2 >= 0.0) || std::abs(p1 + p2 - 1.0) > 1e-12) {
        throw Error(ErrorCode::BadWeights, "mixer probabilities " + fmt(p1) + ", " + fmt(p2) + " must sum to 1");
    }
    const DensityMatrix pure = density_from_pure(psi);
    auto branch = [&](double phi_internal) {
        const CMatrix u = kron(CMatrix::identity(2), mz_unitary(phi_internal, kPi / 2, kPi / 2).matrix());
        return DensityMatrix::from_unnormalized(u * pure.matrix() * u.adjoint());
    };
    const std::vector<WeightedState> parts{{p1, branch(kPi)}, {p2, branch(0.0)}};
    return mix(parts);
}

PureState example_component(const ExampleStateParams &params, int which) {
    params.validate();
    const double alpha = std::sqrt(params.alpha_sq);
    const double beta = std::sqrt(params.beta_sq());
    if (which == 1) return PureState::normalized({beta, 0.0, 0.0, alpha});
    if (which == 2) return PureState::normalized({0.0, beta, alpha, 0.0});
    throw Error(ErrorCode::BadIndex, "component index must be 1 or 2");
}

ExampleState build_example_state(const ExampleStateParams &params) {
    params.validate();
    const std::vector<WeightedState> parts{{params.p1, density_from_pure(example_component(params, 1))},
                                           {params.p2(), density_from_pure(example_component(params, 2))}};
    return {mix(parts), params.constraint_satisfied()};
}

FilterDesign design_filter(const ExampleStateParams &params, bool allow_role_swap) {
    params.validate();
    const double alpha = std::sqrt(params.alpha_sq);
    const double beta = std::sqrt(params.beta_sq());
    if (std::abs(alpha - beta) <= kBalanceTol) {
        return {1.0, false, true, CMatrix::identity(2)};
    }
    if (alpha > beta) {
        const double ratio = beta / alpha;
        return {ratio * ratio, false, false, CMatrix::diagonal({1.0, ratio})};
    }
    if (!allow_role_swap) {
        throw Error(ErrorCode::FilterUndefined, "transmittivity (beta/alpha)^2 = " + fmt(params.beta_sq() / params.alpha_sq) +
                                                    " exceeds 1 for alpha_sq = " + fmt(params.alpha_sq));
    }
    const double ratio = alpha / beta;
    return {ratio * ratio, true, false, CMatrix::diagonal({ratio, 1.0})};
}

CMatrix three_mode_pass_operator(double transmittivity, bool role_swapped) {
    const CMatrix embed = two_into_three();
    return embed.adjoint() * three_mode_unitary(transmittivity, role_swapped).matrix() * embed;
}

DensityMatrix three_mode_filtered_state(const DensityMatrix &rho, double transmittivity, bool role_swapped) {
    if (rho.dim() != 4) {
        throw Error(ErrorCode::DimensionMismatch, "three-mode filter acts on a two-photon state of dimension 4");
    }
    const CMatrix embed = two_into_three();
    const CMatrix id_b = CMatrix::identity(2);
    const CMatrix into = kron(three_mode_unitary(transmittivity, role_swapped).matrix() * embed, id_b);  // 6x4
    const CMatrix big = into * rho.matrix() * into.adjoint();
    const CMatrix keep = kron(embed.adjoint(), id_b);  // 4x6, drops |D>
    return DensityMatrix::from_unnormalized(keep * big * keep.adjoint());
}

DensityMatrix filtered_state_closed_form(const ExampleStateParams &params) {
    params.validate();
    const double h = 1.0 / std::sqrt(2.0);
    const std::vector<WeightedState> parts{
        {params.p1, density_from_pure(PureState::normalized({h, 0.0, 0.0, h}))},
        {params.p2(), density_from_pure(PureState::normalized({0.0, h, h, 0.0}))}};
    return mix(parts);
}

std::string verdict_text(Verdict v) {
    switch (v) {
        case Verdict::HiddenNonlocality:
            return "hidden nonlocality exhibited";
        case Verdict::DirectViolation:
            return "direct violation without filtering";
        case Verdict::NoViolation:
            return "no violation";
    }
    return "unknown";
}

FilterProtocolReport run_filter_protocol(const DensityMatrix &rho, const std::optional<CMatrix> &filter_a,
                                         const std::optional<CMatrix> &filter_b,
                                         const FilterProtocolOptions &options) {
    if (rho.dim() != 4) {
        throw Error(ErrorCode::DimensionMismatch, "protocol needs a two-qubit state");
    }
    const SelectionContext ctx(first_stage(filter_a), first_stage(filter_b), "pass", "pass");

    const MaxChsh pre = max_chsh(rho, options.seed);
    const ChshSettings pre_settings = options.pre_settings.value_or(pre.settings);
    const double pre_chsh = chsh_value(rho, pre_settings);
    const auto pre_a = side_a(pre_settings);
    const auto pre_b = side_b(pre_settings);
    LhvResult pre_lhv = lhv_feasible(behavior_from_quantum(rho, pre_a, pre_b), options.tol);

    const Branch selected = select(rho, ctx);
    if (!selected.state) {
        throw Error(ErrorCode::ZeroProbabilityEvent, "filters never pass jointly");
    }
    DensityMatrix rho_post = tomographic_conditional_state(rho, ctx);
    const CMatrix id = CMatrix::identity(2);
    Branch analytic = local_filter(rho, filter_a.value_or(id), filter_b.value_or(id));
    DensityMatrix rho_post_analytic = analytic.state_or_throw();
    const double discrepancy = max_abs_diff(rho_post.matrix(), rho_post_analytic.matrix());

    const MaxChsh post = max_chsh(rho_post, options.seed);
    const ChshSettings post_settings = options.post_settings.value_or(post.settings);
    const double post_chsh = chsh_value(rho_post, post_settings);
    const auto post_a = side_a(post_settings);
    const auto post_b = side_b(post_settings);
    LhvResult post_lhv = lhv_feasible(conditional_behavior(rho, ctx, post_a, post_b), options.tol);

    Verdict verdict = Verdict::NoViolation;
    if (pre.value > 2.0 + options.tol) {
        verdict = Verdict::DirectViolation;
    } else if (post.value > 2.0 + options.tol && !post_lhv.feasible) {
        verdict = Verdict::HiddenNonlocality;
    }
    return {rho,
            pre,
            pre_chsh,
            std::move(pre_lhv),
            selected.probability,
            std::move(rho_post),
            std::move(rho_post_analytic),
            discrepancy,
            post,
            post_chsh,
            std::move(post_lhv),
            verdict};
}

ProtocolReport preselection_pipeline(const ExampleStateParams &params, const PipelineOptions &options) {
    params.validate();
    FilterDesign filter = design_filter(params, options.allow_role_swap);
    if (!filter.trivial && std::abs(params.p1 - params.p2()) <= kBalanceTol) {
        throw Error(ErrorCode::DegenerateProtocol,
                    "p1 = p2 leaves the filtered state with correlation matrix diag(1, 0, 0), whose CHSH maximum is 2");
    }
    const DensityMatrix rho =
        stochastic_mz_mix(pdc_pair_state(params.alpha_sq), params.p1, params.p2());
    const bool constraint = params.constraint_satisfied();

    FilterProtocolReport run = run_filter_protocol(rho, filter.kraus, std::nullopt, options.protocol);

    DensityMatrix closed = filtered_state_closed_form(params);
    const double closed_error = max_abs_diff(run.rho_post.matrix(), closed.matrix());
    const double three_mode_error =
        max_abs_diff(three_mode_filtered_state(rho, filter.transmittivity, filter.role_swapped).matrix(),
                     run.rho_post.matrix());
    const double dp = params.p1 - params.p2();
    const double pass = 2.0 * std::min(params.alpha_sq, params.beta_sq());
    return {params,
            constraint,
            std::move(filter),
            pass,
            std::move(closed),
            closed_error,
            three_mode_error,
            2.0 * std::sqrt(1.0 + dp * dp),
            std::move(run)};
}

}  // namespace seqbell::optics
