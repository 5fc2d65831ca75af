#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slarag {

enum class ErrorCode {
    // sla_model
    DuplicateAttribute,
    InvalidDirection,
    EmptySloList,
    MissingObservation,
    // dataset / io
    IoError,
    ParseError,
    ValidationError,
    // retrieval / preprocess
    DimensionMismatch,
    EmptyStore,
    MissingScorer,
    // agents
    PolicyViolation,
    MissingRecord,
    TransportError,
    // arbitration
    InvalidThreshold,
    EmptyCandidateSet,
    // evalsim
    OutOfRange,
    DuplicateQueryId,
    ProfileMismatch,
    TooManyAgents,
    // planning
    EstimationUnavailable,
    InfeasibleSla,
    EmptySearchSpace,
    // cli
    ConfigError,
};

std::string_view to_string(ErrorCode code);

// Every library failure carries a code so callers (and tests) can branch on
// the failure kind without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

    ErrorCode code() const noexcept { return code_; }
    // what() without the code prefix
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

} // namespace slarag
