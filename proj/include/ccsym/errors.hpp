#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ccs {

enum class ErrorCode {
    RingMismatch,
    NotAUnit,
    MalformedDescriptor,
    ParseError,
    InsufficientWindow,
    CharacteristicObstruction,
    DomainViolation,
    InvalidParameterChange,
    UnboundedDemand,
    BadExponent,
    StabilizationFailure,
    PrecisionFailure,
    IndexMismatch,
    UnsupportedShape,
    Usage,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, std::size_t offset = npos)
        : std::runtime_error(what), code_(code), offset_(offset) {}

    ErrorCode code() const { return code_; }
    // byte offset into the parsed text, npos when not a parse diagnostic
    std::size_t offset() const { return offset_; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    ErrorCode code_;
    std::size_t offset_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace ccs
