#ifndef SEQBELL_CLI_APP_H
#define SEQBELL_CLI_APP_H

#include <ostream>
#include <string>
#include <vector>

namespace seqbell::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitDegenerate = 4;

/// Runs the command line (without the program name). Reports go to `out`
/// unless --out is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace seqbell::cli

#endif
