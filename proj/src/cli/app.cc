#include "seqbell/cli/app.h"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <optional>

#include "seqbell/cli/commands.h"
#include "seqbell/cli/config.h"
#include "seqbell/errors.h"

namespace seqbell::cli {

namespace {

struct CommonFlags {
    std::string config;
    std::string out;
    std::string format;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::vector<std::string> set;
    std::string table;
};

void add_common(CLI::App &sub, CommonFlags &f) {
    sub.add_option("--config", f.config, "Scenario file with 'key = value' lines")->check(CLI::ExistingFile);
    sub.add_option("--out", f.out, "Write the report to this path");
    sub.add_option("--format", f.format, "Output format")->check(CLI::IsMember({"table", "json", "csv"}));
    sub.add_option("--seed", f.seed, "Seed for the numerical CHSH search fallback");
    sub.add_option("--tol", f.tol, "LHV feasibility tolerance")->check(CLI::PositiveNumber);
    sub.add_option("--set", f.set, "Override a config key, e.g. --set state.p1=0.6");
}

ScenarioConfig build_config(const CommonFlags &f, OutputFormat default_format) {
    ScenarioConfig cfg = f.config.empty() ? ScenarioConfig{} : load_config(f.config);
    for (const auto &kv : f.set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!f.format.empty()) apply_setting(cfg, "output.format", f.format);
    if (!cfg.format_set) cfg.format = default_format;
    if (f.seed) cfg.seed = *f.seed;
    if (f.tol) cfg.tol = *f.tol;
    if (!f.out.empty()) cfg.output_path = f.out;
    if (!f.table.empty()) cfg.lhv_table = f.table;
    return cfg;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Sequential Bell tests, local filtering and LHV models"};
    app.require_subcommand(1);
    CommonFlags flags;

    using Command = std::function<CommandOutput(const ScenarioConfig &)>;
    Command chosen;
    OutputFormat default_format = OutputFormat::Table;

    auto add = [&](const char *name, const char *help, Command fn, OutputFormat fmt) {
        CLI::App *sub = app.add_subcommand(name, help);
        add_common(*sub, flags);
        sub->callback([&chosen, &default_format, fn, fmt]() {
            chosen = fn;
            default_format = fmt;
        });
        return sub;
    };
    add("state", "Describe the configured two-photon state", cmd_state, OutputFormat::Table);
    add("protocol", "Run the filter-then-CHSH protocol with LHV checks", cmd_protocol, OutputFormat::Table);
    add("sweep", "Scan the state family over an (alpha_sq, p1) grid", cmd_sweep, OutputFormat::Csv);
    CLI::App *lhv = add("lhv-check", "Decide whether a behavior table admits a local model", cmd_lhv_check,
                        OutputFormat::Table);
    lhv->add_option("--table", flags.table, "Behavior table file");
    add("loophole", "Detection-loophole demonstration", cmd_loophole, OutputFormat::Table);

    std::vector<std::string> argv_store{"seqbell"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char *> argv;
    for (auto &s : argv_store) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        const ScenarioConfig cfg = build_config(flags, default_format);
        const CommandOutput result = chosen(cfg);
        for (const auto &w : result.warnings) err << "warning: " << w << "\n";
        if (cfg.output_path.empty()) {
            out << result.text;
        } else {
            std::ofstream file(cfg.output_path, std::ios::binary);
            if (!file) throw ConfigError("cannot write " + cfg.output_path.string());
            file << result.text;
        }
        return kExitOk;
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::DegenerateProtocol ? kExitDegenerate : kExitDomain;
    }
}

}  // namespace seqbell::cli
