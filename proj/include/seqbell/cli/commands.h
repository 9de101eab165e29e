#ifndef SEQBELL_CLI_COMMANDS_H
#define SEQBELL_CLI_COMMANDS_H

#include <string>
#include <vector>

#include "seqbell/cli/config.h"

namespace seqbell::cli {

struct CommandOutput {
    std::string text;
    std::vector<std::string> warnings;  // also echoed to stderr by the app
};

/// Each command renders a report in cfg.format. Library errors propagate as
/// seqbell::Error, malformed input as ConfigError.
CommandOutput cmd_state(const ScenarioConfig &cfg);
CommandOutput cmd_protocol(const ScenarioConfig &cfg);
CommandOutput cmd_sweep(const ScenarioConfig &cfg);
CommandOutput cmd_lhv_check(const ScenarioConfig &cfg);
CommandOutput cmd_loophole(const ScenarioConfig &cfg);

/// CSV header line of the sweep report (after the version comment).
inline constexpr const char *kSweepHeader = "alpha_sq,p1,constraint_ok,pre_chsh,pass_prob,post_chsh,lhv_pre,lhv_post";
inline constexpr const char *kSweepVersionLine = "# seqbell-csv v1";

}  // namespace seqbell::cli

#endif
