#include "seqbell/lhv.h"

#include <algorithm>
#include <cmath>

#include "seqbell/simplex.h"

namespace seqbell {

namespace {

std::vector<std::string> index_labels(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
}

// Row-major (x, y, a, b) incidence of a deterministic strategy.
std::vector<double> strategy_column(const DeterministicStrategy &s, std::size_t ma, std::size_t mb, std::size_t oa,
                                    std::size_t ob) {
    std::vector<double> col(ma * mb * oa * ob, 0.0);
    for (std::size_t x = 0; x < ma; ++x) {
        for (std::size_t y = 0; y < mb; ++y) {
            col[((x * mb + y) * oa + s.response_a[x]) * ob + s.response_b[y]] = 1.0;
        }
    }
    return col;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Rescales a separating functional so that deterministic strategies range
// over [-2, 2]. Adding k / (ma * mb) to every coefficient shifts the value of
// every normalized table by exactly k.
std::optional<BellFunctional> normalized_functional(std::span<const double> raw, const BehaviorTable &t,
                                                    const std::vector<std::vector<double>> &columns) {
    double fmax = -1e300;
    double fmin = 1e300;
    for (const auto &col : columns) {
        const double f = dot(raw, col);
        fmax = std::max(fmax, f);
        fmin = std::min(fmin, f);
    }
    if (!(fmax - fmin > 1e-12)) {
        // Constant on the local polytope, as for a pure signalling witness.
        // Tilting by half the gap along one entry keeps the separation and
        // gives the functional a range to normalize.
        const double gap = dot(raw, t.probabilities()) - fmax;
        if (!(gap > 1e-12)) return std::nullopt;
        std::vector<double> tilted(raw.begin(), raw.end());
        tilted[0] += 0.5 * gap;
        return normalized_functional(tilted, t, columns);
    }
    const double scale = 4.0 / (fmax - fmin);
    const double shift = 2.0 - scale * fmax;
    const double per_block = shift / static_cast<double>(t.settings_a() * t.settings_b());
    BellFunctional f;
    f.coefficients.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) f.coefficients[i] = scale * raw[i] + per_block;
    f.local_bound = -1e300;
    for (const auto &col : columns) f.local_bound = std::max(f.local_bound, dot(f.coefficients, col));
    f.value = f.evaluate(t);
    return f;
}

}  // namespace

BehaviorTable::BehaviorTable(std::size_t settings_a, std::size_t settings_b, std::vector<std::string> outcomes_a,
                             std::vector<std::string> outcomes_b, std::vector<double> p)
    : settings_a_(settings_a),
      settings_b_(settings_b),
      outcomes_a_(std::move(outcomes_a)),
      outcomes_b_(std::move(outcomes_b)),
      p_(std::move(p)) {
    if (settings_a_ == 0 || settings_b_ == 0 || outcomes_a_.empty() || outcomes_b_.empty()) {
        throw Error(ErrorCode::WrongScenario, "behavior table needs at least one setting and outcome per side");
    }
    if (p_.size() != settings_a_ * settings_b_ * outcomes_a_.size() * outcomes_b_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "behavior table has " + std::to_string(p_.size()) +
                                                      " entries, scenario needs " +
                                                      std::to_string(settings_a_ * settings_b_ * outcomes_a_.size() *
                                                                     outcomes_b_.size()));
    }
    for (std::size_t x = 0; x < settings_a_; ++x) {
        for (std::size_t y = 0; y < settings_b_; ++y) {
            double total = 0.0;
            for (std::size_t a = 0; a < outcomes_a_.size(); ++a) {
                for (std::size_t b = 0; b < outcomes_b_.size(); ++b) {
                    const double v = (*this)(x, y, a, b);
                    if (!(v >= -1e-12 && v <= 1.0 + 1e-12)) {
                        throw Error(ErrorCode::BadWeights, "probability " + std::to_string(v) + " outside [0,1]");
                    }
                    total += v;
                }
            }
            if (std::abs(total - 1.0) > 1e-10) {
                throw Error(ErrorCode::BadWeights, "P(.,.|" + std::to_string(x) + "," + std::to_string(y) +
                                                       ") sums to " + std::to_string(total));
            }
        }
    }
}

BehaviorTable::BehaviorTable(std::size_t settings_a, std::size_t settings_b, std::size_t outcomes_a,
                             std::size_t outcomes_b, std::vector<double> p)
    : BehaviorTable(settings_a, settings_b, index_labels(outcomes_a), index_labels(outcomes_b), std::move(p)) {}

double BehaviorTable::marginal_a(std::size_t x, std::size_t y, std::size_t a) const {
    double s = 0.0;
    for (std::size_t b = 0; b < outcomes_b(); ++b) s += (*this)(x, y, a, b);
    return s;
}

double BehaviorTable::marginal_b(std::size_t x, std::size_t y, std::size_t b) const {
    double s = 0.0;
    for (std::size_t a = 0; a < outcomes_a(); ++a) s += (*this)(x, y, a, b);
    return s;
}

double BehaviorTable::correlator(std::size_t x, std::size_t y) const {
    if (outcomes_a() != 2 || outcomes_b() != 2) {
        throw Error(ErrorCode::WrongScenario, "correlators need two outcomes per side");
    }
    return (*this)(x, y, 0, 0) - (*this)(x, y, 0, 1) - (*this)(x, y, 1, 0) + (*this)(x, y, 1, 1);
}

std::vector<DeterministicStrategy> enumerate_strategies(std::size_t settings_a, std::size_t settings_b,
                                                        std::size_t outcomes_a, std::size_t outcomes_b) {
    const double count = std::pow(static_cast<double>(outcomes_a), static_cast<double>(settings_a)) *
                         std::pow(static_cast<double>(outcomes_b), static_cast<double>(settings_b));
    if (count > static_cast<double>(kMaxStrategies)) {
        throw Error(ErrorCode::ScenarioTooLarge,
                    "scenario has " + std::to_string(count) + " deterministic strategies (limit 10^6)");
    }
    const auto n = static_cast<std::size_t>(count);
    std::vector<DeterministicStrategy> out;
    out.reserve(n);
    for (std::size_t code = 0; code < n; ++code) {
        DeterministicStrategy s{std::vector<std::size_t>(settings_a), std::vector<std::size_t>(settings_b)};
        std::size_t rest = code;
        for (std::size_t y = settings_b; y-- > 0;) {
            s.response_b[y] = rest % outcomes_b;
            rest /= outcomes_b;
        }
        for (std::size_t x = settings_a; x-- > 0;) {
            s.response_a[x] = rest % outcomes_a;
            rest /= outcomes_a;
        }
        out.push_back(std::move(s));
    }
    return out;
}

void LhvModel::validate() const {
    if (weights.size() != strategies.size() || weights.empty()) {
        throw Error(ErrorCode::BadWeights, "LHV model needs one weight per strategy");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw Error(ErrorCode::BadWeights, "negative LHV weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw Error(ErrorCode::BadWeights, "LHV weights sum to " + std::to_string(total));
    }
}

BehaviorTable LhvModel::expand(std::size_t settings_a, std::size_t settings_b, std::vector<std::string> outcomes_a,
                               std::vector<std::string> outcomes_b) const {
    validate();
    const std::size_t oa = outcomes_a.size();
    const std::size_t ob = outcomes_b.size();
    std::vector<double> p(settings_a * settings_b * oa * ob, 0.0);
    for (std::size_t k = 0; k < strategies.size(); ++k) {
        const auto &s = strategies[k];
        if (s.response_a.size() != settings_a || s.response_b.size() != settings_b) {
            throw Error(ErrorCode::DimensionMismatch, "strategy does not cover every setting");
        }
        for (std::size_t x = 0; x < settings_a; ++x) {
            for (std::size_t y = 0; y < settings_b; ++y) {
                if (s.response_a[x] >= oa || s.response_b[y] >= ob) {
                    throw Error(ErrorCode::BadIndex, "strategy outcome out of range");
                }
                p[((x * settings_b + y) * oa + s.response_a[x]) * ob + s.response_b[y]] += weights[k];
            }
        }
    }
    return BehaviorTable(settings_a, settings_b, std::move(outcomes_a), std::move(outcomes_b), std::move(p));
}

double BellFunctional::evaluate(const BehaviorTable &t) const {
    if (coefficients.size() != t.probabilities().size()) {
        throw Error(ErrorCode::DimensionMismatch, "functional and table shapes differ");
    }
    return dot(coefficients, t.probabilities());
}

BehaviorTable behavior_from_quantum(const DensityMatrix &rho, std::span<const GeneralizedMeasurement> a_settings,
                                    std::span<const GeneralizedMeasurement> b_settings) {
    if (a_settings.empty() || b_settings.empty()) {
        throw Error(ErrorCode::WrongScenario, "need at least one setting per side");
    }
    for (const auto &m : a_settings) {
        if (m.labels() != a_settings.front().labels()) {
            throw Error(ErrorCode::WrongScenario, "A-side settings must share outcome labels");
        }
    }
    for (const auto &m : b_settings) {
        if (m.labels() != b_settings.front().labels()) {
            throw Error(ErrorCode::WrongScenario, "B-side settings must share outcome labels");
        }
    }
    std::vector<double> p;
    for (const auto &ma : a_settings) {
        for (const auto &mb : b_settings) {
            auto joint = sequence_joint(rho, MeasurementSequence{ma}, MeasurementSequence{mb});
            p.insert(p.end(), joint.probabilities().begin(), joint.probabilities().end());
        }
    }
    return BehaviorTable(a_settings.size(), b_settings.size(), a_settings.front().labels(),
                         b_settings.front().labels(), std::move(p));
}

BehaviorTable conditional_behavior(const DensityMatrix &rho, const SelectionContext &ctx,
                                   std::span<const GeneralizedMeasurement> a_settings,
                                   std::span<const GeneralizedMeasurement> b_settings) {
    if (a_settings.empty() || b_settings.empty()) {
        throw Error(ErrorCode::WrongScenario, "need at least one setting per side");
    }
    std::vector<double> p;
    for (const auto &ma : a_settings) {
        for (const auto &mb : b_settings) {
            if (ma.labels() != a_settings.front().labels() || mb.labels() != b_settings.front().labels()) {
                throw Error(ErrorCode::WrongScenario, "settings on one side must share outcome labels");
            }
            auto joint = sequence_joint(rho, MeasurementSequence{ctx.first_a, ma}, MeasurementSequence{ctx.first_b, mb});
            const std::array<AxisAssignment, 2> given{AxisAssignment{0, ctx.outcome_a},
                                                      AxisAssignment{2, ctx.outcome_b}};
            auto cond = conditional(joint, given);
            p.insert(p.end(), cond.probabilities().begin(), cond.probabilities().end());
        }
    }
    return BehaviorTable(a_settings.size(), b_settings.size(), a_settings.front().labels(),
                         b_settings.front().labels(), std::move(p));
}

NoSignallingReport is_no_signalling(const BehaviorTable &t, double tol) {
    double worst = 0.0;
    for (std::size_t x = 0; x < t.settings_a(); ++x) {
        for (std::size_t a = 0; a < t.outcomes_a(); ++a) {
            const double ref = t.marginal_a(x, 0, a);
            for (std::size_t y = 1; y < t.settings_b(); ++y) worst = std::max(worst, std::abs(t.marginal_a(x, y, a) - ref));
        }
    }
    for (std::size_t y = 0; y < t.settings_b(); ++y) {
        for (std::size_t b = 0; b < t.outcomes_b(); ++b) {
            const double ref = t.marginal_b(0, y, b);
            for (std::size_t x = 1; x < t.settings_a(); ++x) worst = std::max(worst, std::abs(t.marginal_b(x, y, b) - ref));
        }
    }
    return {worst <= tol, worst};
}

LhvResult lhv_feasible(const BehaviorTable &t, double tol) {
    const std::size_t ma = t.settings_a();
    const std::size_t mb = t.settings_b();
    const std::size_t oa = t.outcomes_a();
    const std::size_t ob = t.outcomes_b();
    const auto strategies = enumerate_strategies(ma, mb, oa, ob);
    const std::size_t n = strategies.size();
    const std::size_t m = t.probabilities().size();

    std::vector<std::vector<double>> columns;
    columns.reserve(n);
    for (const auto &s : strategies) columns.push_back(strategy_column(s, ma, mb, oa, ob));

    // Phase 1 on  sum_l w_l D_l = t,  w >= 0.
    lp::Problem feas;
    feas.rows = m;
    feas.cols = n;
    feas.a.assign(m * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) feas.a[i * n + j] = columns[j][i];
    }
    feas.b.assign(t.probabilities().begin(), t.probabilities().end());
    lp::Options opt;
    opt.feasibility_tol = tol;
    const lp::Solution sol = lp::solve(feas, opt);

    auto residual_of = [&](const std::vector<double> &w) {
        std::vector<double> r(t.probabilities().begin(), t.probabilities().end());
        for (std::size_t j = 0; j < n; ++j) {
            if (w[j] == 0.0) continue;
            for (std::size_t i = 0; i < m; ++i) r[i] -= w[j] * columns[j][i];
        }
        double worst = 0.0;
        for (double v : r) worst = std::max(worst, std::abs(v));
        return worst;
    };

    LhvResult result;
    result.residual = residual_of(sol.x);
    if (sol.status != lp::Status::IterationLimit && sol.status != lp::Status::Unbounded && result.residual <= tol) {
        LhvModel model;
        std::vector<double> w(n, 0.0);
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (sol.x[j] > 0.0) {
                w[j] = sol.x[j];
                total += sol.x[j];
            }
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (w[j] <= 0.0) continue;
            w[j] /= total;
            model.strategies.push_back(strategies[j]);
            model.weights.push_back(w[j]);
        }
        result.residual = residual_of(w);
        if (result.residual <= tol) {
            result.feasible = true;
            result.model = std::move(model);
            return result;
        }
    }

    // Certificate: largest v with v t + (1 - v) u local, u uniform. The
    // optimal dual is the Bell functional crossed first on the way from u
    // to t.
    const double uniform = 1.0 / static_cast<double>(oa * ob);
    lp::Problem robust;
    robust.rows = m + 1;
    robust.cols = n + 2;  // weights, v, slack of v <= 1
    robust.a.assign(robust.rows * robust.cols, 0.0);
    robust.b.assign(robust.rows, uniform);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) robust.a[i * robust.cols + j] = columns[j][i];
        robust.a[i * robust.cols + n] = -(t.probabilities()[i] - uniform);
    }
    robust.a[m * robust.cols + n] = 1.0;
    robust.a[m * robust.cols + n + 1] = 1.0;
    robust.b[m] = 1.0;
    robust.c.assign(robust.cols, 0.0);
    robust.c[n] = -1.0;
    const lp::Solution rs = lp::solve(robust, opt);

    std::optional<BellFunctional> cert;
    if (rs.status == lp::Status::Optimal) {
        cert = normalized_functional(std::span<const double>(rs.duals.data(), m), t, columns);
    }
    if (!cert || !(cert->violation() > tol)) {
        auto farkas = normalized_functional(sol.duals, t, columns);
        if (farkas && (!cert || farkas->violation() > cert->violation())) cert = farkas;
    }
    result.certificate = std::move(cert);
    return result;
}

double chsh_of_behavior(const BehaviorTable &t) {
    if (t.settings_a() != 2 || t.settings_b() != 2 || t.outcomes_a() != 2 || t.outcomes_b() != 2) {
        throw Error(ErrorCode::WrongScenario, "CHSH needs two settings and two outcomes per side");
    }
    const double e[4] = {t.correlator(0, 0), t.correlator(0, 1), t.correlator(1, 0), t.correlator(1, 1)};
    const double sum = e[0] + e[1] + e[2] + e[3];
    double best = 0.0;
    for (double ek : e) best = std::max(best, std::abs(sum - 2.0 * ek));
    return best;
}

SeparableModelReport separable_lhv_model(std::span<const SeparableComponent> components,
                                         const SequentialProtocol &protocol) {
    if (components.empty()) {
        throw Error(ErrorCode::BadWeights, "separable state needs at least one component");
    }
    double total = 0.0;
    for (const auto &c : components) {
        if (!(c.weight >= 0.0)) throw Error(ErrorCode::BadWeights, "negative component weight");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw Error(ErrorCode::BadWeights, "component weights sum to " + std::to_string(total));
    }
    if (protocol.second_a.empty() || protocol.second_b.empty()) {
        throw Error(ErrorCode::WrongScenario, "protocol needs second-stage settings on both sides");
    }
    const std::size_t ma = protocol.second_a.size();
    const std::size_t mb = protocol.second_b.size();
    const std::size_t oa2 = protocol.second_a.front().size();
    const std::size_t ob2 = protocol.second_b.front().size();

    // Local sequential statistics of one component on one side:
    // first[a1] and second[x][a1][a2] = P(a2 | a1, x).
    struct LocalStats {
        std::vector<double> first;
        std::vector<std::vector<std::vector<double>>> second;
    };
    auto local_stats = [](const DensityMatrix &rho, const GeneralizedMeasurement &first,
                          const std::vector<GeneralizedMeasurement> &second) {
        LocalStats s;
        s.second.assign(second.size(), std::vector<std::vector<double>>(first.size()));
        for (std::size_t a1 = 0; a1 < first.size(); ++a1) {
            Branch br = apply_outcome(rho, first.op(a1));
            s.first.push_back(br.probability);
            for (std::size_t x = 0; x < second.size(); ++x) {
                auto &row = s.second[x][a1];
                row.assign(second[x].size(), 0.0);
                if (!br.state) continue;
                for (std::size_t a2 = 0; a2 < second[x].size(); ++a2) {
                    row[a2] = apply_outcome(*br.state, second[x].op(a2)).probability;
                }
            }
        }
        return s;
    };

    // Mixed-radix enumeration of the per-setting second outcomes.
    auto expand_responses = [](std::size_t settings, std::size_t outcomes) {
        std::vector<std::vector<std::size_t>> all;
        std::size_t n = 1;
        for (std::size_t i = 0; i < settings; ++i) n *= outcomes;
        for (std::size_t code = 0; code < n; ++code) {
            std::vector<std::size_t> r(settings);
            std::size_t rest = code;
            for (std::size_t x = settings; x-- > 0;) {
                r[x] = rest % outcomes;
                rest /= outcomes;
            }
            all.push_back(std::move(r));
        }
        return all;
    };
    const auto responses_a = expand_responses(ma, oa2);
    const auto responses_b = expand_responses(mb, ob2);

    SeparableModelReport report;
    std::vector<WeightedState> mixture;
    for (std::size_t k = 0; k < components.size(); ++k) {
        const auto &c = components[k];
        mixture.push_back({c.weight, DensityMatrix::from_unnormalized(kron(c.rho_a.matrix(), c.rho_b.matrix()))});
        const LocalStats sa = local_stats(c.rho_a, protocol.first_a, protocol.second_a);
        const LocalStats sb = local_stats(c.rho_b, protocol.first_b, protocol.second_b);
        for (std::size_t a1 = 0; a1 < protocol.first_a.size(); ++a1) {
            for (const auto &ra : responses_a) {
                double wa = sa.first[a1];
                for (std::size_t x = 0; x < ma; ++x) wa *= sa.second[x][a1][ra[x]];
                if (wa <= 0.0) continue;
                for (std::size_t b1 = 0; b1 < protocol.first_b.size(); ++b1) {
                    for (const auto &rb : responses_b) {
                        double wb = sb.first[b1];
                        for (std::size_t y = 0; y < mb; ++y) wb *= sb.second[y][b1][rb[y]];
                        const double w = c.weight * wa * wb;
                        if (w <= 0.0) continue;
                        report.model.states.push_back({k, a1, ra, b1, rb});
                        report.model.weights.push_back(w);
                    }
                }
            }
        }
    }
    const DensityMatrix rho = mix(mixture);

    // Reproduction of the full sequential statistics.
    report.reproduction_error = 0.0;
    for (std::size_t x = 0; x < ma; ++x) {
        for (std::size_t y = 0; y < mb; ++y) {
            auto joint = sequence_joint(rho, MeasurementSequence{protocol.first_a, protocol.second_a[x]},
                                        MeasurementSequence{protocol.first_b, protocol.second_b[y]});
            std::vector<double> model_p(joint.size(), 0.0);
            for (std::size_t l = 0; l < report.model.states.size(); ++l) {
                const auto &h = report.model.states[l];
                const std::array<std::size_t, 4> idx{h.first_a, h.second_a[x], h.first_b, h.second_b[y]};
                model_p[joint.flat_index(idx)] += report.model.weights[l];
            }
            for (std::size_t f = 0; f < joint.size(); ++f) {
                report.reproduction_error =
                    std::max(report.reproduction_error, std::abs(model_p[f] - joint.probabilities()[f]));
            }
        }
    }

    // Every subensemble selected by the first stage.
    auto first_joint = sequence_joint(rho, MeasurementSequence{protocol.first_a}, MeasurementSequence{protocol.first_b});
    report.all_conditionals_feasible = true;
    for (std::size_t a1 = 0; a1 < protocol.first_a.size(); ++a1) {
        for (std::size_t b1 = 0; b1 < protocol.first_b.size(); ++b1) {
            const double pab = first_joint.at({a1, b1});
            if (!(pab > kZeroProbability)) continue;
            SelectionContext ctx(protocol.first_a, protocol.first_b, protocol.first_a.label(a1),
                                 protocol.first_b.label(b1));
            BehaviorTable quantum = conditional_behavior(rho, ctx, protocol.second_a, protocol.second_b);
            LhvResult lp_result = lhv_feasible(quantum);

            LhvModel conditional_model;
            double mass = 0.0;
            for (std::size_t l = 0; l < report.model.states.size(); ++l) {
                const auto &h = report.model.states[l];
                if (h.first_a != a1 || h.first_b != b1) continue;
                conditional_model.strategies.push_back({h.second_a, h.second_b});
                conditional_model.weights.push_back(report.model.weights[l]);
                mass += report.model.weights[l];
            }
            for (auto &w : conditional_model.weights) w /= mass;
            BehaviorTable from_model = conditional_model.expand(ma, mb, quantum.outcome_labels_a(),
                                                                quantum.outcome_labels_b());
            double err = 0.0;
            for (std::size_t i = 0; i < quantum.probabilities().size(); ++i) {
                err = std::max(err, std::abs(quantum.probabilities()[i] - from_model.probabilities()[i]));
            }
            report.conditionals.push_back(
                {protocol.first_a.label(a1), protocol.first_b.label(b1), pab, lp_result.feasible, err});
            report.all_conditionals_feasible = report.all_conditionals_feasible && lp_result.feasible;
        }
    }
    return report;
}

LoopholeReport loophole_demo() {
    constexpr int nd = RejectionStrategy::kNoDetect;
    // Strategy k targets the setting pair (k / 2, k % 2); only the (1,1)
    // strategy answers -1 on side B.
    std::vector<WeightedRejectionStrategy> strategies{
        {0.25, {{0, nd}, {0, nd}}},
        {0.25, {{0, nd}, {nd, 0}}},
        {0.25, {{nd, 0}, {0, nd}}},
        {0.25, {{nd, 0}, {nd, 1}}},
    };

    std::vector<double> full(2 * 2 * 3 * 3, 0.0);
    std::vector<double> forced(2 * 2 * 2 * 2, 0.0);
    std::vector<double> post(2 * 2 * 2 * 2, 0.0);
    std::vector<double> rate(4, 0.0);
    for (std::size_t x = 0; x < 2; ++x) {
        for (std::size_t y = 0; y < 2; ++y) {
            for (const auto &ws : strategies) {
                const int ra = ws.strategy.response_a[x];
                const int rb = ws.strategy.response_b[y];
                const std::size_t fa = ra == nd ? 2 : static_cast<std::size_t>(ra);
                const std::size_t fb = rb == nd ? 2 : static_cast<std::size_t>(rb);
                full[((x * 2 + y) * 3 + fa) * 3 + fb] += ws.weight;
                const std::size_t ga = ra == nd ? 0 : static_cast<std::size_t>(ra);
                const std::size_t gb = rb == nd ? 0 : static_cast<std::size_t>(rb);
                forced[((x * 2 + y) * 2 + ga) * 2 + gb] += ws.weight;
                if (ra != nd && rb != nd) {
                    post[((x * 2 + y) * 2 + static_cast<std::size_t>(ra)) * 2 + static_cast<std::size_t>(rb)] +=
                        ws.weight;
                    rate[x * 2 + y] += ws.weight;
                }
            }
            for (std::size_t k = 0; k < 4; ++k) post[(x * 2 + y) * 4 + k] /= rate[x * 2 + y];
        }
    }

    BehaviorTable full_table(2, 2, {"+1", "-1", "none"}, {"+1", "-1", "none"}, full);
    BehaviorTable post_table(2, 2, {"+1", "-1"}, {"+1", "-1"}, post);
    BehaviorTable forced_table(2, 2, {"+1", "-1"}, {"+1", "-1"}, forced);
    const bool full_feasible = lhv_feasible(full_table).feasible;
    const double post_chsh = chsh_of_behavior(post_table);
    const double forced_chsh = chsh_of_behavior(forced_table);
    return {std::move(strategies), std::move(full_table), full_feasible, std::move(post_table), post_chsh,
            std::move(rate), std::move(forced_table), forced_chsh};
}

}  // namespace seqbell
