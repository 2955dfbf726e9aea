// Error codes shared by the whole library and mirrored by the C API.

#ifndef CHS_ERROR_HPP
#define CHS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace chs {

enum class ErrorCode {
    None = 0,
    NonConvergence,
    Unbounded,
    NotDifferentiable,
    DomainMismatch,
    DomainViolation,
    NotMultiplicative,
    Blowup,
    MeanMismatch,
    ParseError,
    ValidationError,
    IoError,
    AssertFailed,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::None: return "None";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::Unbounded: return "Unbounded";
        case ErrorCode::NotDifferentiable: return "NotDifferentiable";
        case ErrorCode::DomainMismatch: return "DomainMismatch";
        case ErrorCode::DomainViolation: return "DomainViolation";
        case ErrorCode::NotMultiplicative: return "NotMultiplicative";
        case ErrorCode::Blowup: return "Blowup";
        case ErrorCode::MeanMismatch: return "MeanMismatch";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::AssertFailed: return "AssertFailed";
    }
    return "Unknown";
}

}  // namespace chs

#endif
