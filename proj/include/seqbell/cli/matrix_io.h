#ifndef SEQBELL_CLI_MATRIX_IO_H
#define SEQBELL_CLI_MATRIX_IO_H

#include <filesystem>
#include <string>

#include "seqbell/lhv.h"
#include "seqbell/qcore.h"

namespace seqbell::cli {

/// Accepts "re", "re+imi", "re-imi", "imi" and "i"-only forms such as "-i".
/// Throws ConfigError on anything else.
Complex parse_complex(const std::string &token);

/// "%.17g" real part followed by a signed imaginary part, e.g. "0.5+0i".
std::string format_complex(Complex z);

/// One matrix row per line, whitespace-separated entries, '#' comments.
CMatrix parse_matrix(const std::string &text, const std::string &origin);
CMatrix read_matrix_file(const std::filesystem::path &path);

/// Header "settings_a settings_b outcomes_a outcomes_b", then one line per
/// (x, y), x-major, listing P(a,b|x,y) with a as the slow index. Layout
/// errors throw ConfigError; normalization failures surface from
/// BehaviorTable as seqbell::Error.
BehaviorTable parse_behavior_table(const std::string &text, const std::string &origin);
BehaviorTable read_behavior_table_file(const std::filesystem::path &path);

std::string read_text_file(const std::filesystem::path &path);

}  // namespace seqbell::cli

#endif
