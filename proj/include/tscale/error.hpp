#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tscale {

enum class Errc {
    InvalidTimeScale,
    NotInTimeScale,
    ClusterPoint,
    EmptyWindow,
    QuadratureFailure,
    IncompatibleFamily,
    InvalidDelaySpec,
    OutOfDomain,
    NotRegressive,
    NegativeOneplus,
    PreconditionViolated,
    OutsideS,
    NoSignChange,
    NotBracketed,
    InvalidProblem,
    NegativeBaseFractionalPower,
    HistoryGap,
    FieldGap,
    WindowMismatch,
    NonpositiveTail,
    ConfigError,
};

std::string_view to_string(Errc code) noexcept;

/// Library-wide exception; `code()` identifies the failure class.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Raised by configuration ingestion; `pointer()` is an RFC 6901 JSON pointer
/// to the offending field.
class ConfigError : public Error {
public:
    ConfigError(std::string pointer, const std::string& what)
        : Error(Errc::ConfigError, (pointer.empty() ? std::string("/") : pointer) + ": " + what),
          pointer_(std::move(pointer)) {}

    const std::string& pointer() const noexcept { return pointer_; }

private:
    std::string pointer_;
};

}  // namespace tscale
