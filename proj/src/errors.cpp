#include "ccsym/errors.hpp"

namespace ccs {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::RingMismatch: return "RingMismatch";
        case ErrorCode::NotAUnit: return "NotAUnit";
        case ErrorCode::MalformedDescriptor: return "MalformedDescriptor";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InsufficientWindow: return "InsufficientWindow";
        case ErrorCode::CharacteristicObstruction: return "CharacteristicObstruction";
        case ErrorCode::DomainViolation: return "DomainViolation";
        case ErrorCode::InvalidParameterChange: return "InvalidParameterChange";
        case ErrorCode::UnboundedDemand: return "UnboundedDemand";
        case ErrorCode::BadExponent: return "BadExponent";
        case ErrorCode::StabilizationFailure: return "StabilizationFailure";
        case ErrorCode::PrecisionFailure: return "PrecisionFailure";
        case ErrorCode::IndexMismatch: return "IndexMismatch";
        case ErrorCode::UnsupportedShape: return "UnsupportedShape";
        case ErrorCode::Usage: return "Usage";
    }
    return "Unknown";
}

}  // namespace ccs
