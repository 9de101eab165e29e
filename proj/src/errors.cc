#include "seqbell/errors.h"

namespace seqbell {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NotPsd: return "NotPsd";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::BadWeights: return "BadWeights";
        case ErrorCode::IncompletePartition: return "IncompletePartition";
        case ErrorCode::BadLabel: return "BadLabel";
        case ErrorCode::ZeroProbabilityBranch: return "ZeroProbabilityBranch";
        case ErrorCode::ZeroOperator: return "ZeroOperator";
        case ErrorCode::BadIndex: return "BadIndex";
        case ErrorCode::ZeroProbabilityEvent: return "ZeroProbabilityEvent";
        case ErrorCode::WrongScenario: return "WrongScenario";
        case ErrorCode::ScenarioTooLarge: return "ScenarioTooLarge";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::FilterUndefined: return "FilterUndefined";
        case ErrorCode::DegenerateProtocol: return "DegenerateProtocol";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

}  // namespace seqbell
