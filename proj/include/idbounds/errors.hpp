#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace idbounds {

enum class ErrorCode {
    OutOfRange,
    NonMonotone,
    QuadratureFailure,
    InvalidProfile,
    InvalidArgument,
    Divergent,
    PreconditionViolated,
    EmptySpectrum,
    EmptyRange,
    MissingEstimate,
    TruncationTooCoarse,
    UnsupportedAlpha,
    BudgetExceeded,
    EmptyBatch,
    InsufficientTail,
    CenterMismatch,
    ConfigError,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline std::string_view error_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonMonotone: return "NonMonotone";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Divergent: return "Divergent";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::EmptySpectrum: return "EmptySpectrum";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::MissingEstimate: return "MissingEstimate";
    case ErrorCode::TruncationTooCoarse: return "TruncationTooCoarse";
    case ErrorCode::UnsupportedAlpha: return "UnsupportedAlpha";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::InsufficientTail: return "InsufficientTail";
    case ErrorCode::CenterMismatch: return "CenterMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

} // namespace idbounds
