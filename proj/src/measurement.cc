#include "seqbell/measurement.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>

namespace seqbell {

namespace {

constexpr double kEigenvalueMergeTol = 1e-9;

std::string eigenvalue_label(double value) {
    if (std::abs(value) < 1e-12) value = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%+.9g", value);
    return buf;
}

std::size_t product_of_sizes(const std::vector<OutcomeAxis> &axes) {
    std::size_t n = 1;
    for (const auto &a : axes) n *= a.labels.size();
    return n;
}

}  // namespace

GeneralizedMeasurement::GeneralizedMeasurement(std::vector<std::string> labels, std::vector<CMatrix> operators)
    : labels_(std::move(labels)), operators_(std::move(operators)) {
    validate_measurement(labels_, operators_);
}

GeneralizedMeasurement GeneralizedMeasurement::trivial(std::size_t dim, std::string label) {
    return GeneralizedMeasurement({std::move(label)}, {CMatrix::identity(dim)});
}

std::size_t GeneralizedMeasurement::index_of(const std::string &label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        throw Error(ErrorCode::BadLabel, "measurement has no outcome labeled '" + label + "'");
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

double completeness_residual(std::span<const CMatrix> operators) {
    if (operators.empty()) return 1.0;
    const std::size_t d = operators.front().cols();
    CMatrix sum(d, d);
    for (const auto &v : operators) sum += v.adjoint() * v;
    return max_abs_diff(sum, CMatrix::identity(d));
}

void validate_measurement(const std::vector<std::string> &labels, const std::vector<CMatrix> &operators,
                          double tol) {
    if (operators.empty()) {
        throw Error(ErrorCode::IncompletePartition, "measurement has no outcomes");
    }
    if (labels.size() != operators.size()) {
        throw Error(ErrorCode::BadLabel, "measurement has " + std::to_string(labels.size()) + " labels for " +
                                             std::to_string(operators.size()) + " operators");
    }
    std::set<std::string> seen;
    for (const auto &l : labels) {
        if (!seen.insert(l).second) {
            throw Error(ErrorCode::BadLabel, "duplicate outcome label '" + l + "'");
        }
    }
    const std::size_t d = operators.front().rows();
    for (const auto &v : operators) {
        if (v.rows() != d || v.cols() != d) {
            throw Error(ErrorCode::DimensionMismatch, "measurement operators must all be " + std::to_string(d) +
                                                          "x" + std::to_string(d));
        }
    }
    const double residual = completeness_residual(operators);
    if (!(residual <= tol)) {
        throw Error(ErrorCode::IncompletePartition,
                    "sum of V^dagger V deviates from identity by " + std::to_string(residual));
    }
}

void validate_measurement(const GeneralizedMeasurement &m, double tol) {
    validate_measurement(m.labels(), m.operators(), tol);
}

GeneralizedMeasurement projective_from_observable(const CMatrix &hermitian) {
    auto eig = hermitian_eig(hermitian);
    const std::size_t d = hermitian.rows();
    std::vector<std::string> labels;
    std::vector<CMatrix> projectors;
    std::size_t k = 0;
    while (k < d) {
        const double lead = eig.values[k];
        CMatrix p(d, d);
        std::size_t j = k;
        for (; j < d && std::abs(eig.values[j] - lead) <= kEigenvalueMergeTol; ++j) {
            auto col = eig.vectors.column(j);
            p += CMatrix::outer(col, col);
        }
        labels.push_back(eigenvalue_label(lead));
        projectors.push_back(p.hermitian_part());
        k = j;
    }
    return GeneralizedMeasurement(std::move(labels), std::move(projectors));
}

const DensityMatrix &Branch::state_or_throw() const {
    if (!state) {
        throw Error(ErrorCode::ZeroProbabilityBranch,
                    "branch probability " + std::to_string(probability) + " has no post-measurement state");
    }
    return *state;
}

Branch apply_outcome(const DensityMatrix &rho, const CMatrix &v) {
    if (v.rows() != rho.dim() || v.cols() != rho.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "operator and state dimensions differ");
    }
    CMatrix unnormalized = v * rho.matrix() * v.adjoint();
    Branch b;
    b.probability = std::max(unnormalized.trace().real(), 0.0);
    if (b.probability > kZeroProbability) {
        b.state = DensityMatrix::from_unnormalized(unnormalized);
    }
    return b;
}

Branch local_filter(const DensityMatrix &rho, const CMatrix &v, const CMatrix &w) {
    if (!v.is_square() || !w.is_square() || v.rows() * w.rows() != rho.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "local filter dimensions do not match the state");
    }
    return apply_outcome(rho, kron(v, w));
}

GeneralizedMeasurement filter_from_operator(const CMatrix &v) {
    if (!v.is_square()) {
        throw Error(ErrorCode::DimensionMismatch, "filter operator must be square");
    }
    const double norm = operator_norm(v);
    if (!(norm > 0.0)) {
        throw Error(ErrorCode::ZeroOperator, "filter operator is zero");
    }
    CMatrix pass = v * (1.0 / norm);
    CMatrix fail = psd_sqrt((CMatrix::identity(v.rows()) - pass.adjoint() * pass).hermitian_part());
    return GeneralizedMeasurement({"pass", "fail"}, {std::move(pass), std::move(fail)});
}

MeasurementSequence::MeasurementSequence(std::vector<GeneralizedMeasurement> steps) : steps_(std::move(steps)) {
    if (steps_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "measurement sequence needs at least one step");
    }
    for (const auto &s : steps_) {
        if (s.dim() != steps_.front().dim()) {
            throw Error(ErrorCode::DimensionMismatch, "all steps of a sequence must share one dimension");
        }
    }
}

MeasurementSequence::MeasurementSequence(std::initializer_list<GeneralizedMeasurement> steps)
    : MeasurementSequence(std::vector<GeneralizedMeasurement>(steps)) {}

JointDistribution::JointDistribution(std::vector<OutcomeAxis> axes, std::vector<double> probabilities)
    : axes_(std::move(axes)), probabilities_(std::move(probabilities)) {
    for (const auto &a : axes_) {
        if (a.labels.empty()) {
            throw Error(ErrorCode::DimensionMismatch, "outcome axis without labels");
        }
    }
    if (probabilities_.size() != product_of_sizes(axes_)) {
        throw Error(ErrorCode::DimensionMismatch, "probability table size does not match axes");
    }
    double total = 0.0;
    for (double p : probabilities_) {
        if (!(p >= -1e-12)) {
            throw Error(ErrorCode::BadWeights, "negative probability " + std::to_string(p));
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw Error(ErrorCode::BadWeights, "joint distribution sums to " + std::to_string(total));
    }
}

std::size_t JointDistribution::flat_index(std::span<const std::size_t> outcome) const {
    if (outcome.size() != axes_.size()) {
        throw Error(ErrorCode::BadIndex, "outcome tuple has wrong rank");
    }
    std::size_t flat = 0;
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        if (outcome[i] >= axes_[i].labels.size()) {
            throw Error(ErrorCode::BadIndex, "outcome index out of range on axis " + std::to_string(i));
        }
        flat = flat * axes_[i].labels.size() + outcome[i];
    }
    return flat;
}

std::vector<std::size_t> JointDistribution::outcome_of(std::size_t flat) const {
    std::vector<std::size_t> out(axes_.size());
    for (std::size_t i = axes_.size(); i-- > 0;) {
        const std::size_t n = axes_[i].labels.size();
        out[i] = flat % n;
        flat /= n;
    }
    return out;
}

std::size_t JointDistribution::axis_label_index(std::size_t axis, const std::string &label) const {
    if (axis >= axes_.size()) {
        throw Error(ErrorCode::BadIndex, "axis " + std::to_string(axis) + " out of range");
    }
    const auto &labels = axes_[axis].labels;
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) {
        throw Error(ErrorCode::BadLabel, "axis " + std::to_string(axis) + " has no label '" + label + "'");
    }
    return static_cast<std::size_t>(it - labels.begin());
}

double JointDistribution::at_labels(std::span<const std::string> labels) const {
    if (labels.size() != axes_.size()) {
        throw Error(ErrorCode::BadIndex, "label tuple has wrong rank");
    }
    std::vector<std::size_t> idx(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) idx[i] = axis_label_index(i, labels[i]);
    return at(idx);
}

JointDistribution sequence_joint(const DensityMatrix &rho, const MeasurementSequence &seq_a,
                                 const MeasurementSequence &seq_b) {
    std::vector<Side> order(seq_a.size(), Side::A);
    order.insert(order.end(), seq_b.size(), Side::B);
    return sequence_joint(rho, seq_a, seq_b, order);
}

JointDistribution sequence_joint(const DensityMatrix &rho, const MeasurementSequence &seq_a,
                                 const MeasurementSequence &seq_b, std::span<const Side> order) {
    const std::size_t da = seq_a.dim();
    const std::size_t db = seq_b.dim();
    if (rho.dim() != da * db) {
        throw Error(ErrorCode::DimensionMismatch, "state dimension " + std::to_string(rho.dim()) +
                                                      " does not match local dimensions " + std::to_string(da) +
                                                      "*" + std::to_string(db));
    }
    const auto count_a = static_cast<std::size_t>(std::count(order.begin(), order.end(), Side::A));
    if (count_a != seq_a.size() || order.size() - count_a != seq_b.size()) {
        throw Error(ErrorCode::InvalidArgument, "step order does not match the sequence lengths");
    }

    const std::size_t na = seq_a.size();
    std::vector<OutcomeAxis> axes;
    for (std::size_t i = 0; i < na; ++i) axes.push_back({Side::A, i, seq_a[i].labels()});
    for (std::size_t j = 0; j < seq_b.size(); ++j) axes.push_back({Side::B, j, seq_b[j].labels()});

    struct Step {
        std::size_t axis;
        std::vector<CMatrix> embedded;
    };
    std::vector<Step> exec;
    std::size_t next_a = 0;
    std::size_t next_b = 0;
    const CMatrix id_a = CMatrix::identity(da);
    const CMatrix id_b = CMatrix::identity(db);
    for (Side side : order) {
        Step s;
        if (side == Side::A) {
            s.axis = next_a;
            for (const auto &v : seq_a[next_a].operators()) s.embedded.push_back(kron(v, id_b));
            ++next_a;
        } else {
            s.axis = na + next_b;
            for (const auto &w : seq_b[next_b].operators()) s.embedded.push_back(kron(id_a, w));
            ++next_b;
        }
        exec.push_back(std::move(s));
    }

    std::vector<double> probs(product_of_sizes(axes), 0.0);
    std::vector<std::size_t> outcome(axes.size(), 0);
    auto flat = [&] {
        std::size_t f = 0;
        for (std::size_t i = 0; i < axes.size(); ++i) f = f * axes[i].labels.size() + outcome[i];
        return f;
    };

    std::function<void(std::size_t, const DensityMatrix &, double)> descend =
        [&](std::size_t level, const DensityMatrix &state, double prob) {
            if (level == exec.size()) {
                probs[flat()] = prob;
                return;
            }
            const Step &step = exec[level];
            for (std::size_t k = 0; k < step.embedded.size(); ++k) {
                Branch br = apply_outcome(state, step.embedded[k]);
                if (!br.state) continue;  // every completion stays exactly 0
                outcome[step.axis] = k;
                descend(level + 1, *br.state, prob * br.probability);
            }
        };
    descend(0, rho, 1.0);
    return JointDistribution(std::move(axes), std::move(probs));
}

JointDistribution marginalize(const JointDistribution &j, std::span<const std::size_t> kept_axes) {
    std::vector<std::size_t> kept(kept_axes.begin(), kept_axes.end());
    std::sort(kept.begin(), kept.end());
    if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
        throw Error(ErrorCode::BadIndex, "duplicate axis in marginalize");
    }
    for (std::size_t a : kept) {
        if (a >= j.rank()) {
            throw Error(ErrorCode::BadIndex, "axis " + std::to_string(a) + " out of range");
        }
    }
    std::vector<OutcomeAxis> axes;
    for (std::size_t a : kept) axes.push_back(j.axes()[a]);
    std::vector<double> probs(product_of_sizes(axes), 0.0);
    for (std::size_t f = 0; f < j.size(); ++f) {
        auto full = j.outcome_of(f);
        std::size_t g = 0;
        for (std::size_t a : kept) g = g * j.axes()[a].labels.size() + full[a];
        probs[g] += j.probabilities()[f];
    }
    return JointDistribution(std::move(axes), std::move(probs));
}

JointDistribution conditional(const JointDistribution &j, std::span<const AxisAssignment> given) {
    std::vector<int> fixed(j.rank(), -1);
    for (const auto &g : given) {
        const std::size_t idx = j.axis_label_index(g.axis, g.label);
        if (fixed[g.axis] != -1) {
            throw Error(ErrorCode::BadIndex, "axis " + std::to_string(g.axis) + " conditioned twice");
        }
        fixed[g.axis] = static_cast<int>(idx);
    }
    std::vector<std::size_t> rest;
    for (std::size_t a = 0; a < j.rank(); ++a) {
        if (fixed[a] == -1) rest.push_back(a);
    }
    if (rest.empty()) {
        throw Error(ErrorCode::BadIndex, "conditioning on every axis leaves nothing to return");
    }
    std::vector<OutcomeAxis> axes;
    for (std::size_t a : rest) axes.push_back(j.axes()[a]);
    std::vector<double> probs(product_of_sizes(axes), 0.0);
    double mass = 0.0;
    for (std::size_t f = 0; f < j.size(); ++f) {
        auto full = j.outcome_of(f);
        bool match = true;
        for (std::size_t a = 0; a < j.rank() && match; ++a) {
            match = fixed[a] == -1 || static_cast<std::size_t>(fixed[a]) == full[a];
        }
        if (!match) continue;
        std::size_t g = 0;
        for (std::size_t a : rest) g = g * j.axes()[a].labels.size() + full[a];
        probs[g] += j.probabilities()[f];
        mass += j.probabilities()[f];
    }
    if (!(mass > kZeroProbability)) {
        throw Error(ErrorCode::ZeroProbabilityEvent, "conditioning event has probability " + std::to_string(mass));
    }
    for (auto &p : probs) p /= mass;
    return JointDistribution(std::move(axes), std::move(probs));
}

SelectionContext::SelectionContext(GeneralizedMeasurement first_a_, GeneralizedMeasurement first_b_,
                                   std::string outcome_a_, std::string outcome_b_)
    : first_a(std::move(first_a_)),
      first_b(std::move(first_b_)),
      outcome_a(std::move(outcome_a_)),
      outcome_b(std::move(outcome_b_)) {
    first_a.index_of(outcome_a);
    first_b.index_of(outcome_b);
}

Branch select(const DensityMatrix &rho, const SelectionContext &ctx) {
    return local_filter(rho, ctx.first_a.op(ctx.first_a.index_of(ctx.outcome_a)),
                        ctx.first_b.op(ctx.first_b.index_of(ctx.outcome_b)));
}

double causality_check(const DensityMatrix &rho, const MeasurementSequence &prefix_a,
                       const MeasurementSequence &prefix_b, std::span<const LaterSteps> alternatives) {
    if (alternatives.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "causality_check needs at least two alternatives");
    }
    std::vector<double> reference;
    double worst = 0.0;
    for (const auto &alt : alternatives) {
        std::vector<GeneralizedMeasurement> a = prefix_a.steps();
        a.insert(a.end(), alt.a.begin(), alt.a.end());
        std::vector<GeneralizedMeasurement> b = prefix_b.steps();
        b.insert(b.end(), alt.b.begin(), alt.b.end());
        auto joint = sequence_joint(rho, MeasurementSequence(std::move(a)), MeasurementSequence(std::move(b)));

        std::vector<std::size_t> kept;
        for (std::size_t i = 0; i < prefix_a.size(); ++i) kept.push_back(i);
        const std::size_t total_a = prefix_a.size() + alt.a.size();
        for (std::size_t i = 0; i < prefix_b.size(); ++i) kept.push_back(total_a + i);
        auto marginal = marginalize(joint, kept);
        std::vector<double> probs(marginal.probabilities().begin(), marginal.probabilities().end());
        if (reference.empty()) {
            reference = std::move(probs);
            continue;
        }
        for (std::size_t k = 0; k < probs.size(); ++k) worst = std::max(worst, std::abs(probs[k] - reference[k]));
    }
    return worst;
}

}  // namespace seqbell
