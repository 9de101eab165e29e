#ifndef SEQBELL_ERRORS_H
#define SEQBELL_ERRORS_H

#include <stdexcept>
#include <string>
#include <string_view>

namespace seqbell {

enum class ErrorCode {
    NotHermitian,
    NotPsd,
    NotNormalized,
    NonFinite,
    DimensionMismatch,
    BadWeights,
    IncompletePartition,
    BadLabel,
    ZeroProbabilityBranch,
    ZeroOperator,
    BadIndex,
    ZeroProbabilityEvent,
    WrongScenario,
    ScenarioTooLarge,
    OutOfRange,
    FilterUndefined,
    DegenerateProtocol,
    InvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

/// Domain error raised by every module. The code is stable and is what the
/// CLI maps to exit statuses; the message is for humans.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &message);

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace seqbell

#endif
