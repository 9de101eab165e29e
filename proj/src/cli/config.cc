#include "seqbell/cli/config.h"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace seqbell::cli {

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string &key, const std::string &value) {
    errno = 0;
    char *end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
    return v;
}

std::uint64_t parse_unsigned(const std::string &key, const std::string &value) {
    errno = 0;
    char *end = nullptr;
    if (value.empty() || value[0] == '-') throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (end != value.c_str() + value.size() || errno == ERANGE) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
    }
    return v;
}

bool parse_bool(const std::string &key, const std::string &value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string &value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

std::filesystem::path resolve(const std::filesystem::path &base, const std::string &value) {
    std::filesystem::path p(value);
    if (p.is_relative() && !base.empty()) return base / p;
    return p;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Splits "prefix.<name>.field" into name and field.
bool named_key(const std::string &key, const std::string &prefix, std::string &name, std::string &field) {
    if (key.rfind(prefix, 0) != 0) return false;
    const std::string rest = key.substr(prefix.size());
    const auto dot = rest.rfind('.');
    if (dot == std::string::npos || dot == 0) return false;
    name = rest.substr(0, dot);
    field = rest.substr(dot + 1);
    return true;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string &text, const std::string &origin) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (!out.emplace(key, value).second) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key " + key);
        }
    }
    return out;
}

void apply_setting(ScenarioConfig &cfg, const std::string &key, const std::string &value,
                   const std::filesystem::path &base_dir) {
    std::string name;
    std::string field;
    if (key == "state.kind") {
        if (value == "example") cfg.state_kind = StateKind::Example;
        else if (value == "matrix") cfg.state_kind = StateKind::Matrix;
        else if (value == "optics") cfg.state_kind = StateKind::Optics;
        else throw ConfigError(key + ": expected example, matrix or optics, got '" + value + "'");
    } else if (key == "state.alpha_sq") {
        cfg.alpha_sq = parse_double(key, value);
    } else if (key == "state.p1") {
        cfg.p1 = parse_double(key, value);
    } else if (key == "state.matrix_file") {
        cfg.matrix_file = resolve(base_dir, value);
    } else if (named_key(key, "observable.", name, field)) {
        if (field == "theta") cfg.observables[name].theta = parse_double(key, value);
        else if (field == "phi") cfg.observables[name].phi = parse_double(key, value);
        else throw ConfigError("unknown key " + key);
    } else if (named_key(key, "filter.", name, field)) {
        if (field != "file") throw ConfigError("unknown key " + key);
        if (name == "balancing" || name == "none") throw ConfigError(key + ": filter name '" + name + "' is reserved");
        cfg.filter_files[name] = resolve(base_dir, value);
    } else if (key == "protocol.mode") {
        if (value == "preselection") cfg.protocol_mode = ProtocolMode::Preselection;
        else if (value == "custom") cfg.protocol_mode = ProtocolMode::Custom;
        else throw ConfigError(key + ": expected preselection or custom, got '" + value + "'");
    } else if (key == "protocol.a.filter") {
        cfg.filter_a = value;
    } else if (key == "protocol.b.filter") {
        cfg.filter_b = value;
    } else if (key == "protocol.settings") {
        if (value == "optimal") {
            cfg.settings.clear();
        } else {
            cfg.settings = split_list(value);
            if (cfg.settings.size() != 4) {
                throw ConfigError(key + ": expected 'optimal' or four observable names a, a', b, b'");
            }
        }
    } else if (key == "protocol.allow_role_swap") {
        cfg.allow_role_swap = parse_bool(key, value);
    } else if (key == "sweep.alpha_sq_min") {
        cfg.sweep_alpha_sq_min = parse_double(key, value);
    } else if (key == "sweep.alpha_sq_max") {
        cfg.sweep_alpha_sq_max = parse_double(key, value);
    } else if (key == "sweep.p1_min") {
        cfg.sweep_p1_min = parse_double(key, value);
    } else if (key == "sweep.p1_max") {
        cfg.sweep_p1_max = parse_double(key, value);
    } else if (key == "sweep.resolution") {
        cfg.sweep_resolution = parse_unsigned(key, value);
        if (cfg.sweep_resolution == 0) throw ConfigError(key + ": must be at least 1");
    } else if (key == "lhv.table") {
        cfg.lhv_table = resolve(base_dir, value);
    } else if (key == "lhv.tol") {
        cfg.tol = parse_double(key, value);
        if (!(cfg.tol > 0.0)) throw ConfigError(key + ": must be positive");
    } else if (key == "output.format") {
        if (value == "table") cfg.format = OutputFormat::Table;
        else if (value == "json") cfg.format = OutputFormat::Json;
        else if (value == "csv") cfg.format = OutputFormat::Csv;
        else throw ConfigError(key + ": expected table, json or csv, got '" + value + "'");
        cfg.format_set = true;
    } else if (key == "output.path") {
        cfg.output_path = resolve(base_dir, value);
    } else if (key == "output.seed") {
        cfg.seed = parse_unsigned(key, value);
    } else {
        throw ConfigError("unknown key " + key);
    }
}

ScenarioConfig parse_config(const std::string &text, const std::string &origin, const std::filesystem::path &base_dir) {
    ScenarioConfig cfg;
    for (const auto &[key, value] : parse_key_values(text, origin)) apply_setting(cfg, key, value, base_dir);
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string(), path.parent_path());
}

std::string format_name(OutputFormat f) {
    switch (f) {
        case OutputFormat::Table:
            return "table";
        case OutputFormat::Json:
            return "json";
        case OutputFormat::Csv:
            return "csv";
    }
    return "table";
}

std::vector<std::pair<std::string, std::string>> config_entries(const ScenarioConfig &cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    const char *kinds[] = {"example", "matrix", "optics"};
    out.emplace_back("state.kind", kinds[static_cast<int>(cfg.state_kind)]);
    out.emplace_back("state.alpha_sq", num(cfg.alpha_sq));
    out.emplace_back("state.p1", num(cfg.p1));
    if (!cfg.matrix_file.empty()) out.emplace_back("state.matrix_file", cfg.matrix_file.string());
    for (const auto &[name, obs] : cfg.observables) {
        out.emplace_back("observable." + name + ".theta", num(obs.theta));
        out.emplace_back("observable." + name + ".phi", num(obs.phi));
    }
    for (const auto &[name, path] : cfg.filter_files) out.emplace_back("filter." + name + ".file", path.string());
    out.emplace_back("protocol.mode", cfg.protocol_mode == ProtocolMode::Preselection ? "preselection" : "custom");
    out.emplace_back("protocol.a.filter", cfg.filter_a);
    out.emplace_back("protocol.b.filter", cfg.filter_b);
    std::string settings = "optimal";
    if (!cfg.settings.empty()) {
        settings.clear();
        for (std::size_t i = 0; i < cfg.settings.size(); ++i) settings += (i ? ", " : "") + cfg.settings[i];
    }
    out.emplace_back("protocol.settings", settings);
    out.emplace_back("protocol.allow_role_swap", cfg.allow_role_swap ? "true" : "false");
    out.emplace_back("sweep.alpha_sq_min", num(cfg.sweep_alpha_sq_min));
    out.emplace_back("sweep.alpha_sq_max", num(cfg.sweep_alpha_sq_max));
    out.emplace_back("sweep.p1_min", num(cfg.sweep_p1_min));
    out.emplace_back("sweep.p1_max", num(cfg.sweep_p1_max));
    out.emplace_back("sweep.resolution", std::to_string(cfg.sweep_resolution));
    if (!cfg.lhv_table.empty()) out.emplace_back("lhv.table", cfg.lhv_table.string());
    out.emplace_back("lhv.tol", num(cfg.tol));
    if (cfg.format_set) out.emplace_back("output.format", format_name(cfg.format));
    if (!cfg.output_path.empty()) out.emplace_back("output.path", cfg.output_path.string());
    out.emplace_back("output.seed", std::to_string(cfg.seed));
    return out;
}

}  // namespace seqbell::cli
