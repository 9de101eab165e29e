#ifndef SEQBELL_CLI_CONFIG_H
#define SEQBELL_CLI_CONFIG_H

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqbell::cli {

/// Malformed input: unknown keys, unparsable values, unreadable files.
/// Maps to exit code 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class StateKind { Example, Matrix, Optics };
enum class ProtocolMode { Preselection, Custom };
enum class OutputFormat { Table, Json, Csv };

struct ObservableSpec {
    double theta = 0.0;
    double phi = 0.0;
};

struct ScenarioConfig {
    StateKind state_kind = StateKind::Example;
    double alpha_sq = 0.8;
    double p1 = 0.7;
    std::filesystem::path matrix_file;

    std::map<std::string, ObservableSpec> observables;
    std::map<std::string, std::filesystem::path> filter_files;

    ProtocolMode protocol_mode = ProtocolMode::Preselection;
    std::string filter_a = "balancing";  // balancing | none | filter name
    std::string filter_b = "none";       // none | filter name
    std::vector<std::string> settings;   // empty: optimal; else a, a', b, b'
    bool allow_role_swap = false;

    double sweep_alpha_sq_min = 0.05;
    double sweep_alpha_sq_max = 0.95;
    double sweep_p1_min = 0.05;
    double sweep_p1_max = 0.95;
    std::size_t sweep_resolution = 5;

    std::filesystem::path lhv_table;
    double tol = 1e-9;

    OutputFormat format = OutputFormat::Table;
    bool format_set = false;  // otherwise each command picks its default
    std::filesystem::path output_path;
    std::uint64_t seed = 0;
};

/// Parses "key = value" lines; '#' starts a comment. Duplicate keys and
/// lines without '=' throw ConfigError.
std::map<std::string, std::string> parse_key_values(const std::string &text, const std::string &origin);

/// Applies one key. Unknown keys and bad values throw ConfigError naming the
/// key. Relative paths are resolved against base_dir.
void apply_setting(ScenarioConfig &cfg, const std::string &key, const std::string &value,
                   const std::filesystem::path &base_dir = {});

ScenarioConfig parse_config(const std::string &text, const std::string &origin = "<config>",
                            const std::filesystem::path &base_dir = {});
ScenarioConfig load_config(const std::filesystem::path &path);

/// Flat key/value echo of a configuration, accepted back by parse_config.
std::vector<std::pair<std::string, std::string>> config_entries(const ScenarioConfig &cfg);

std::string format_name(OutputFormat f);

}  // namespace seqbell::cli

#endif
