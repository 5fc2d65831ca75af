#include "slarag/error.hpp"

namespace slarag {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DuplicateAttribute:    return "DuplicateAttribute";
        case ErrorCode::InvalidDirection:      return "InvalidDirection";
        case ErrorCode::EmptySloList:          return "EmptySloList";
        case ErrorCode::MissingObservation:    return "MissingObservation";
        case ErrorCode::IoError:               return "IoError";
        case ErrorCode::ParseError:            return "ParseError";
        case ErrorCode::ValidationError:       return "ValidationError";
        case ErrorCode::DimensionMismatch:     return "DimensionMismatch";
        case ErrorCode::EmptyStore:            return "EmptyStore";
        case ErrorCode::MissingScorer:         return "MissingScorer";
        case ErrorCode::PolicyViolation:       return "PolicyViolation";
        case ErrorCode::MissingRecord:         return "MissingRecord";
        case ErrorCode::TransportError:        return "TransportError";
        case ErrorCode::InvalidThreshold:      return "InvalidThreshold";
        case ErrorCode::EmptyCandidateSet:     return "EmptyCandidateSet";
        case ErrorCode::OutOfRange:            return "OutOfRange";
        case ErrorCode::DuplicateQueryId:      return "DuplicateQueryId";
        case ErrorCode::ProfileMismatch:       return "ProfileMismatch";
        case ErrorCode::TooManyAgents:         return "TooManyAgents";
        case ErrorCode::EstimationUnavailable: return "EstimationUnavailable";
        case ErrorCode::InfeasibleSla:         return "InfeasibleSla";
        case ErrorCode::EmptySearchSpace:      return "EmptySearchSpace";
        case ErrorCode::ConfigError:           return "ConfigError";
    }
    return "Unknown";
}

} // namespace slarag
