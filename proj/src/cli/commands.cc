#include "seqbell/cli/commands.h"

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "seqbell/bell.h"
#include "seqbell/cli/json_writer.h"
#include "seqbell/cli/matrix_io.h"
#include "seqbell/lhv.h"
#include "seqbell/optics.h"

namespace seqbell::cli {

namespace {

using optics::ExampleStateParams;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

ExampleStateParams checked_params(const ScenarioConfig &cfg) {
    if (!(cfg.alpha_sq > 0.0 && cfg.alpha_sq < 1.0)) {
        throw Error(ErrorCode::OutOfRange, "state.alpha_sq = " + num(cfg.alpha_sq) + " outside (0, 1)");
    }
    if (!(cfg.p1 > 0.0 && cfg.p1 < 1.0)) {
        throw Error(ErrorCode::OutOfRange, "state.p1 = " + num(cfg.p1) + " outside (0, 1)");
    }
    return {cfg.alpha_sq, cfg.p1};
}

struct LoadedState {
    DensityMatrix rho;
    std::optional<bool> constraint;  // only for the parametrized family
    std::string description;
};

LoadedState load_state(const ScenarioConfig &cfg) {
    switch (cfg.state_kind) {
        case StateKind::Example: {
            const auto params = checked_params(cfg);
            auto built = optics::build_example_state(params);
            return {built.rho, built.constraint_satisfied,
                    "example (alpha_sq=" + short_num(params.alpha_sq) + ", p1=" + short_num(params.p1) + ")"};
        }
        case StateKind::Optics: {
            const auto params = checked_params(cfg);
            auto rho = optics::stochastic_mz_mix(optics::pdc_pair_state(params.alpha_sq), params.p1, params.p2());
            return {rho, params.constraint_satisfied(),
                    "optics (alpha_sq=" + short_num(params.alpha_sq) + ", p1=" + short_num(params.p1) + ")"};
        }
        case StateKind::Matrix: {
            if (cfg.matrix_file.empty()) throw ConfigError("state.matrix_file is required for state.kind = matrix");
            CMatrix m = read_matrix_file(cfg.matrix_file);
            return {DensityMatrix(std::move(m)), std::nullopt, "matrix (" + cfg.matrix_file.string() + ")"};
        }
    }
    throw ConfigError("unknown state kind");
}

BlochObservable named_observable(const ScenarioConfig &cfg, const std::string &name) {
    const auto it = cfg.observables.find(name);
    if (it == cfg.observables.end()) throw ConfigError("protocol.settings: unknown observable '" + name + "'");
    return BlochObservable::from_angles(it->second.theta, it->second.phi);
}

std::optional<ChshSettings> configured_settings(const ScenarioConfig &cfg) {
    if (cfg.settings.empty()) return std::nullopt;
    return ChshSettings{named_observable(cfg, cfg.settings[0]), named_observable(cfg, cfg.settings[1]),
                        named_observable(cfg, cfg.settings[2]), named_observable(cfg, cfg.settings[3])};
}

std::optional<CMatrix> configured_filter(const ScenarioConfig &cfg, const std::string &choice, const char *key) {
    if (choice == "none") return std::nullopt;
    if (choice == "balancing") {
        if (cfg.state_kind == StateKind::Matrix) {
            throw ConfigError(std::string(key) + ": the balancing filter needs state.alpha_sq, not a matrix state");
        }
        return optics::design_filter(checked_params(cfg), cfg.allow_role_swap).kraus;
    }
    const auto it = cfg.filter_files.find(choice);
    if (it == cfg.filter_files.end()) throw ConfigError(std::string(key) + ": unknown filter '" + choice + "'");
    return read_matrix_file(it->second);
}

void write_matrix_json(JsonWriter &w, const CMatrix &m) {
    w.begin_object().key("re").begin_array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        w.begin_array();
        for (std::size_t j = 0; j < m.cols(); ++j) w.value(m(i, j).real());
        w.end_array();
    }
    w.end_array().key("im").begin_array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        w.begin_array();
        for (std::size_t j = 0; j < m.cols(); ++j) w.value(m(i, j).imag());
        w.end_array();
    }
    w.end_array().end_object();
}

void write_config_json(JsonWriter &w, const ScenarioConfig &cfg) {
    w.key("config").begin_object();
    for (const auto &[k, v] : config_entries(cfg)) w.key(k).value(v);
    w.end_object();
}

void write_vec3(JsonWriter &w, const Vec3 &v) {
    w.begin_array();
    for (double x : v) w.value(x);
    w.end_array();
}

void write_settings_json(JsonWriter &w, const ChshSettings &s) {
    w.begin_object();
    w.key("a");
    write_vec3(w, s.a.direction());
    w.key("a_prime");
    write_vec3(w, s.a_prime.direction());
    w.key("b");
    write_vec3(w, s.b.direction());
    w.key("b_prime");
    write_vec3(w, s.b_prime.direction());
    w.end_object();
}

void write_lhv_json(JsonWriter &w, const LhvResult &r) {
    w.begin_object();
    w.key("feasible").value(r.feasible);
    w.key("residual").value(r.residual);
    if (r.certificate) {
        w.key("certificate").begin_object();
        w.key("value").value(r.certificate->value);
        w.key("local_bound").value(r.certificate->local_bound);
        w.key("coefficients").begin_array();
        for (double c : r.certificate->coefficients) w.value(c);
        w.end_array().end_object();
    }
    if (r.model) {
        w.key("model").begin_array();
        for (std::size_t k = 0; k < r.model->strategies.size(); ++k) {
            w.begin_object().key("weight").value(r.model->weights[k]).key("response_a").begin_array();
            for (auto o : r.model->strategies[k].response_a) w.value(static_cast<std::uint64_t>(o));
            w.end_array().key("response_b").begin_array();
            for (auto o : r.model->strategies[k].response_b) w.value(static_cast<std::uint64_t>(o));
            w.end_array().end_object();
        }
        w.end_array();
    }
    w.end_object();
}

std::string vec3_text(const Vec3 &v) {
    return "(" + short_num(v[0]) + ", " + short_num(v[1]) + ", " + short_num(v[2]) + ")";
}

std::string settings_text(const ChshSettings &s) {
    return "a=" + vec3_text(s.a.direction()) + " a'=" + vec3_text(s.a_prime.direction()) +
           " b=" + vec3_text(s.b.direction()) + " b'=" + vec3_text(s.b_prime.direction());
}

std::string lhv_text(const LhvResult &r) {
    std::string s = r.feasible ? "feasible" : "infeasible";
    s += " (residual " + short_num(r.residual);
    if (r.certificate) {
        s += ", certificate value " + short_num(r.certificate->value) + " vs local bound " +
             short_num(r.certificate->local_bound);
    }
    return s + ")";
}

void require_format(const ScenarioConfig &cfg, const char *command, bool csv_ok) {
    if (cfg.format == OutputFormat::Csv && !csv_ok) {
        throw ConfigError(std::string("--format csv is not available for ") + command);
    }
}

void protocol_table(std::ostringstream &os, const optics::FilterProtocolReport &run) {
    os << "pre-filter max CHSH:    " << short_num(run.pre.value) << "\n";
    os << "pre-filter settings:    " << settings_text(run.pre.settings) << "\n";
    os << "pre-filter CHSH used:   " << short_num(run.pre_chsh) << "\n";
    os << "pre-filter LHV:         " << lhv_text(run.pre_lhv) << "\n";
    os << "filter pass prob:       " << short_num(run.pass_probability) << "\n";
    os << "filter route mismatch:  " << short_num(run.route_discrepancy) << "\n";
    os << "post-filter max CHSH:   " << short_num(run.post.value) << "\n";
    os << "post-filter settings:   " << settings_text(run.post.settings) << "\n";
    os << "post-filter CHSH used:  " << short_num(run.post_chsh) << "\n";
    os << "post-filter LHV:        " << lhv_text(run.post_lhv) << "\n";
    os << "verdict: " << optics::verdict_text(run.verdict) << "\n";
}

void protocol_json(JsonWriter &w, const optics::FilterProtocolReport &run) {
    w.key("pre").begin_object();
    w.key("max_chsh").value(run.pre.value);
    w.key("settings");
    write_settings_json(w, run.pre.settings);
    w.key("chsh_used").value(run.pre_chsh);
    w.key("lhv");
    write_lhv_json(w, run.pre_lhv);
    w.end_object();
    w.key("pass_probability").value(run.pass_probability);
    w.key("route_discrepancy").value(run.route_discrepancy);
    w.key("rho_post");
    write_matrix_json(w, run.rho_post.matrix());
    w.key("post").begin_object();
    w.key("max_chsh").value(run.post.value);
    w.key("settings");
    write_settings_json(w, run.post.settings);
    w.key("chsh_used").value(run.post_chsh);
    w.key("lhv");
    write_lhv_json(w, run.post_lhv);
    w.end_object();
    w.key("verdict").value(optics::verdict_text(run.verdict));
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

void check_sweep_bounds(const char *name_min, double lo, const char *name_max, double hi) {
    if (!(lo > 0.0 && lo < 1.0)) throw Error(ErrorCode::OutOfRange, std::string(name_min) + " = " + num(lo) + " outside (0, 1)");
    if (!(hi > 0.0 && hi < 1.0)) throw Error(ErrorCode::OutOfRange, std::string(name_max) + " = " + num(hi) + " outside (0, 1)");
    if (lo > hi) throw Error(ErrorCode::OutOfRange, std::string(name_min) + " exceeds " + name_max);
}

struct SweepRow {
    double alpha_sq;
    double p1;
    bool constraint_ok;
    double pre_chsh;
    std::optional<double> pass_prob;  // absent when the filter is undefined
    std::optional<double> post_chsh;
    bool lhv_pre;
    std::optional<bool> lhv_post;
};

SweepRow sweep_point(double alpha_sq, double p1, const ScenarioConfig &cfg) {
    const ExampleStateParams params{alpha_sq, p1};
    const auto state = optics::build_example_state(params);
    SweepRow row{alpha_sq, p1, state.constraint_satisfied, 0.0, std::nullopt, std::nullopt, false, std::nullopt};
    optics::FilterProtocolOptions opt;
    opt.tol = cfg.tol;
    opt.seed = cfg.seed;
    std::optional<optics::FilterDesign> filter;
    try {
        filter = optics::design_filter(params, cfg.allow_role_swap);
    } catch (const Error &e) {
        if (e.code() != ErrorCode::FilterUndefined) throw;
    }
    if (!filter) {
        const MaxChsh pre = max_chsh(state.rho, cfg.seed);
        row.pre_chsh = pre.value;
        const std::vector<GeneralizedMeasurement> a{pre.settings.a.measurement(), pre.settings.a_prime.measurement()};
        const std::vector<GeneralizedMeasurement> b{pre.settings.b.measurement(), pre.settings.b_prime.measurement()};
        row.lhv_pre = lhv_feasible(behavior_from_quantum(state.rho, a, b), cfg.tol).feasible;
        return row;
    }
    const auto run = optics::run_filter_protocol(state.rho, filter->kraus, std::nullopt, opt);
    row.pre_chsh = run.pre.value;
    row.lhv_pre = run.pre_lhv.feasible;
    row.pass_prob = run.pass_probability;
    row.post_chsh = run.post.value;
    row.lhv_post = run.post_lhv.feasible;
    return row;
}

const char *feasibility_word(bool f) { return f ? "feasible" : "infeasible"; }

}  // namespace

CommandOutput cmd_state(const ScenarioConfig &cfg) {
    require_format(cfg, "state", false);
    const LoadedState st = load_state(cfg);
    const auto eig = hermitian_eig(st.rho.matrix());
    const bool two_qubit = st.rho.dim() == 4;
    std::optional<CorrelationMatrix> t;
    std::optional<MaxChsh> best;
    if (two_qubit) {
        t = correlation_matrix(st.rho);
        best = max_chsh(st.rho, cfg.seed);
    }

    if (cfg.format == OutputFormat::Json) {
        JsonWriter w;
        w.begin_object().key("command").value("state");
        write_config_json(w, cfg);
        w.key("state").value(st.description);
        w.key("constraint_satisfied");
        if (st.constraint) w.value(*st.constraint);
        else w.null();
        w.key("rho");
        write_matrix_json(w, st.rho.matrix());
        w.key("eigenvalues").begin_array();
        for (double v : eig.values) w.value(v);
        w.end_array();
        if (t) {
            w.key("correlation_matrix").begin_array();
            for (const auto &row : t->t) write_vec3(w, row);
            w.end_array();
            w.key("max_chsh").value(best->value);
        }
        w.end_object();
        return {w.str(), {}};
    }

    std::ostringstream os;
    os << "state: " << st.description << "\n";
    if (st.constraint) os << "constraint (p1-p2)^2 <= (alpha^2-beta^2)^2: " << (*st.constraint ? "true" : "false") << "\n";
    os << "density matrix:\n";
    for (std::size_t i = 0; i < st.rho.dim(); ++i) {
        os << " ";
        for (std::size_t j = 0; j < st.rho.dim(); ++j) os << " " << format_complex(st.rho(i, j));
        os << "\n";
    }
    os << "eigenvalues:";
    for (double v : eig.values) os << " " << short_num(v);
    os << "\n";
    if (t) {
        os << "correlation matrix T:\n";
        for (const auto &row : t->t) os << "  " << short_num(row[0]) << " " << short_num(row[1]) << " " << short_num(row[2]) << "\n";
        os << "max CHSH: " << short_num(best->value) << "\n";
    }
    return {os.str(), {}};
}

CommandOutput cmd_protocol(const ScenarioConfig &cfg) {
    require_format(cfg, "protocol", false);
    optics::FilterProtocolOptions popt;
    popt.tol = cfg.tol;
    popt.seed = cfg.seed;
    popt.pre_settings = configured_settings(cfg);
    popt.post_settings = popt.pre_settings;

    std::optional<optics::ProtocolReport> full;
    std::optional<optics::FilterProtocolReport> custom;
    std::string description;
    if (cfg.protocol_mode == ProtocolMode::Preselection) {
        if (cfg.state_kind == StateKind::Matrix) {
            throw ConfigError("protocol.mode = preselection needs state.kind = example or optics");
        }
        optics::PipelineOptions opt;
        opt.protocol = popt;
        opt.allow_role_swap = cfg.allow_role_swap;
        full = optics::preselection_pipeline(checked_params(cfg), opt);
        description = "preselection (alpha_sq=" + short_num(cfg.alpha_sq) + ", p1=" + short_num(cfg.p1) + ")";
    } else {
        const LoadedState st = load_state(cfg);
        const auto fa = configured_filter(cfg, cfg.filter_a, "protocol.a.filter");
        const auto fb = configured_filter(cfg, cfg.filter_b, "protocol.b.filter");
        custom = optics::run_filter_protocol(st.rho, fa, fb, popt);
        description = "custom on " + st.description + ", filter A: " + cfg.filter_a + ", filter B: " + cfg.filter_b;
    }
    const optics::FilterProtocolReport &run = full ? full->run : *custom;

    if (cfg.format == OutputFormat::Json) {
        JsonWriter w;
        w.begin_object().key("command").value("protocol");
        write_config_json(w, cfg);
        w.key("protocol").value(description);
        if (full) {
            w.key("constraint_satisfied").value(full->constraint_satisfied);
            w.key("filter").begin_object();
            w.key("transmittivity").value(full->filter.transmittivity);
            w.key("role_swapped").value(full->filter.role_swapped);
            w.key("trivial").value(full->filter.trivial);
            w.end_object();
            w.key("analytic_pass_probability").value(full->analytic_pass_probability);
            w.key("closed_form_error").value(full->closed_form_error);
            w.key("three_mode_error").value(full->three_mode_error);
            w.key("expected_post_chsh").value(full->expected_post_chsh);
        }
        protocol_json(w, run);
        w.end_object();
        return {w.str(), {}};
    }

    std::ostringstream os;
    os << "protocol: " << description << "\n";
    if (full) {
        os << "constraint satisfied:   " << (full->constraint_satisfied ? "true" : "false") << "\n";
        os << "filter transmittivity:  " << short_num(full->filter.transmittivity)
           << (full->filter.role_swapped ? " (mode |1> filtered)" : "") << (full->filter.trivial ? " (no filtering)" : "")
           << "\n";
        os << "closed-form mismatch:   " << short_num(full->closed_form_error) << "\n";
        os << "three-mode mismatch:    " << short_num(full->three_mode_error) << "\n";
    }
    protocol_table(os, run);
    return {os.str(), {}};
}

CommandOutput cmd_sweep(const ScenarioConfig &cfg) {
    check_sweep_bounds("sweep.alpha_sq_min", cfg.sweep_alpha_sq_min, "sweep.alpha_sq_max", cfg.sweep_alpha_sq_max);
    check_sweep_bounds("sweep.p1_min", cfg.sweep_p1_min, "sweep.p1_max", cfg.sweep_p1_max);
    const auto alphas = linspace(cfg.sweep_alpha_sq_min, cfg.sweep_alpha_sq_max, cfg.sweep_resolution);
    const auto p1s = linspace(cfg.sweep_p1_min, cfg.sweep_p1_max, cfg.sweep_resolution);
    std::vector<SweepRow> rows;
    for (double a : alphas) {
        for (double p : p1s) rows.push_back(sweep_point(a, p, cfg));
    }

    auto opt_num = [](const std::optional<double> &v) { return v ? num(*v) : std::string(); };
    if (cfg.format == OutputFormat::Json) {
        JsonWriter w;
        w.begin_object().key("command").value("sweep");
        write_config_json(w, cfg);
        w.key("rows").begin_array();
        for (const auto &r : rows) {
            w.begin_object();
            w.key("alpha_sq").value(r.alpha_sq).key("p1").value(r.p1).key("constraint_ok").value(r.constraint_ok);
            w.key("pre_chsh").value(r.pre_chsh);
            w.key("pass_prob");
            if (r.pass_prob) w.value(*r.pass_prob);
            else w.null();
            w.key("post_chsh");
            if (r.post_chsh) w.value(*r.post_chsh);
            else w.null();
            w.key("lhv_pre").value(feasibility_word(r.lhv_pre));
            w.key("lhv_post").value(r.lhv_post ? feasibility_word(*r.lhv_post) : "undefined");
            w.end_object();
        }
        w.end_array().end_object();
        return {w.str(), {}};
    }

    std::ostringstream os;
    os << kSweepVersionLine << "\n" << kSweepHeader << "\n";
    for (const auto &r : rows) {
        os << num(r.alpha_sq) << "," << num(r.p1) << "," << (r.constraint_ok ? "true" : "false") << ","
           << num(r.pre_chsh) << "," << opt_num(r.pass_prob) << "," << opt_num(r.post_chsh) << ","
           << feasibility_word(r.lhv_pre) << "," << (r.lhv_post ? feasibility_word(*r.lhv_post) : "undefined") << "\n";
    }
    return {os.str(), {}};
}

CommandOutput cmd_lhv_check(const ScenarioConfig &cfg) {
    require_format(cfg, "lhv-check", false);
    if (cfg.lhv_table.empty()) throw ConfigError("lhv-check needs a behavior table (--table or lhv.table)");
    const BehaviorTable table = read_behavior_table_file(cfg.lhv_table);
    std::vector<std::string> warnings;
    const auto ns = is_no_signalling(table);
    if (!ns.ok) {
        warnings.push_back("table is signalling (marginal deviation " + short_num(ns.max_deviation) +
                           "); it cannot be local, running the LP anyway");
    }
    const LhvResult r = lhv_feasible(table, cfg.tol);
    const bool chsh_scenario =
        table.settings_a() == 2 && table.settings_b() == 2 && table.outcomes_a() == 2 && table.outcomes_b() == 2;

    if (cfg.format == OutputFormat::Json) {
        JsonWriter w;
        w.begin_object().key("command").value("lhv-check");
        write_config_json(w, cfg);
        w.key("warnings").begin_array();
        for (const auto &s : warnings) w.value(s);
        w.end_array();
        w.key("no_signalling").value(ns.ok);
        w.key("signalling_deviation").value(ns.max_deviation);
        if (chsh_scenario) w.key("chsh").value(chsh_of_behavior(table));
        w.key("verdict").value(feasibility_word(r.feasible));
        w.key("lhv");
        write_lhv_json(w, r);
        w.end_object();
        return {w.str(), warnings};
    }

    std::ostringstream os;
    for (const auto &s : warnings) os << "warning: " << s << "\n";
    os << "scenario: " << table.settings_a() << " x " << table.settings_b() << " settings, " << table.outcomes_a()
       << " x " << table.outcomes_b() << " outcomes\n";
    if (chsh_scenario) os << "CHSH: " << short_num(chsh_of_behavior(table)) << "\n";
    os << "verdict: " << feasibility_word(r.feasible) << "\n";
    os << "reproduction residual: " << short_num(r.residual) << "\n";
    if (r.model) {
        os << "local model (weight: A responses | B responses):\n";
        for (std::size_t k = 0; k < r.model->strategies.size(); ++k) {
            os << "  " << short_num(r.model->weights[k]) << ":";
            for (auto o : r.model->strategies[k].response_a) os << " " << o;
            os << " |";
            for (auto o : r.model->strategies[k].response_b) os << " " << o;
            os << "\n";
        }
    }
    if (r.certificate) {
        os << "certificate value: " << short_num(r.certificate->value) << "\n";
        os << "certificate local bound: " << short_num(r.certificate->local_bound) << "\n";
        os << "certificate coefficients c(a,b|x,y):\n";
        for (std::size_t x = 0; x < table.settings_a(); ++x) {
            for (std::size_t y = 0; y < table.settings_b(); ++y) {
                os << "  x=" << x << " y=" << y << ":";
                for (std::size_t a = 0; a < table.outcomes_a(); ++a) {
                    for (std::size_t b = 0; b < table.outcomes_b(); ++b) {
                        os << " " << short_num(r.certificate->coefficients[table.index(x, y, a, b)]);
                    }
                }
                os << "\n";
            }
        }
    }
    return {os.str(), warnings};
}

CommandOutput cmd_loophole(const ScenarioConfig &cfg) {
    require_format(cfg, "loophole", false);
    const LoopholeReport rep = loophole_demo();
    auto response = [](int r) { return r == RejectionStrategy::kNoDetect ? std::string("none") : std::string(r == 0 ? "+1" : "-1"); };

    std::ostringstream explanation;
    explanation << "Each hidden strategy registers a particle only under one pair of settings, so which runs end in a "
                   "coincidence is decided after the settings are chosen. Conditioning on coincidences then keeps a "
                   "different subensemble for every setting pair, and that conditioned table reaches CHSH "
                << short_num(rep.post_selected_chsh)
                << " although the full table with 'none' kept as an outcome is "
                << (rep.full_behavior_feasible ? "local" : "nonlocal")
                << ". A selection made before the settings are chosen, by an earlier filter whose result cannot depend "
                   "on them, keeps one subensemble for all setting pairs, and a local model of the whole ensemble "
                   "restricts to a local model of it. Run configuration: format="
                << format_name(cfg.format) << ", seed=" << cfg.seed << ", tol=" << short_num(cfg.tol) << ".";

    if (cfg.format == OutputFormat::Json) {
        JsonWriter w;
        w.begin_object().key("command").value("loophole");
        write_config_json(w, cfg);
        w.key("strategies").begin_array();
        for (const auto &s : rep.strategies) {
            w.begin_object().key("weight").value(s.weight).key("response_a").begin_array();
            for (int r : s.strategy.response_a) w.value(response(r));
            w.end_array().key("response_b").begin_array();
            for (int r : s.strategy.response_b) w.value(response(r));
            w.end_array().end_object();
        }
        w.end_array();
        w.key("post_selected_chsh").value(rep.post_selected_chsh);
        w.key("coincidence_rate").begin_array();
        for (double r : rep.coincidence_rate) w.value(r);
        w.end_array();
        w.key("full_behavior_feasible").value(rep.full_behavior_feasible);
        w.key("forced_chsh").value(rep.forced_chsh);
        w.key("explanation").value(explanation.str());
        w.end_object();
        return {w.str(), {}};
    }

    std::ostringstream os;
    os << "strategies (weight: A at x=0,1 | B at y=0,1):\n";
    for (const auto &s : rep.strategies) {
        os << "  " << short_num(s.weight) << ": " << response(s.strategy.response_a[0]) << " "
           << response(s.strategy.response_a[1]) << " | " << response(s.strategy.response_b[0]) << " "
           << response(s.strategy.response_b[1]) << "\n";
    }
    os << "coincidence rate (x,y):";
    for (std::size_t k = 0; k < rep.coincidence_rate.size(); ++k) {
        os << " (" << k / 2 << "," << k % 2 << ")=" << short_num(rep.coincidence_rate[k]);
    }
    os << "\n";
    os << "post-selected CHSH: " << short_num(rep.post_selected_chsh) << "\n";
    os << "full table with no-detection outcome: " << (rep.full_behavior_feasible ? "LHV-feasible" : "LHV-infeasible")
       << "\n";
    os << "CHSH with no-detection counted as +1: " << short_num(rep.forced_chsh) << "\n\n";
    os << explanation.str() << "\n";
    return {os.str(), {}};
}

}  // namespace seqbell::cli
