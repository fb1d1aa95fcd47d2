#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pns {

/// Failure categories shared by every module. The CLI maps these onto exit codes.
enum class ErrorKind {
    InvalidArgument,
    InvalidState,
    IncompatibleRhs,
    SingularPoint,
    OutOfDomain,
    BlowupPoint,
    NoRealBlowup,
    InvalidExponent,
    Precondition,
    DegenerateField,
    InvalidRange,
    StepRejected,
    Divergence,
    Io,
    Validation,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

}  // namespace pns
