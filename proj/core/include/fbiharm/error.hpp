#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fbiharm {

enum class ErrorKind {
    InvalidArgument,
    Domain,
    SingularEvaluation,
    OrderExceeded,
    DegenerateMetric,
    TargetDomainEscape,
    ImmersionDegenerate,
    PositivityViolation,
    DescriptorMismatch,
    Dimension,
    Parse,
    UnknownName,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the engine. The kind is stable and is what the
/// tests and the runner dispatch on; the message carries location detail.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
    {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised when an elementary function receives an argument outside its domain.
class DomainError : public Error {
public:
    DomainError(const std::string& message, double value)
        : Error(ErrorKind::Domain, message), value_(value)
    {}

    double value() const noexcept { return value_; }

private:
    double value_;
};

}  // namespace fbiharm
