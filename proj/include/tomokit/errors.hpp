#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace tomokit {

// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad parameters supplied by the caller (unknown names, non-positive sizes, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent TGM container.
class FormatError : public Error {
public:
    using Error::Error;
};

// A data invariant or operation precondition does not hold.
class InvariantViolation : public Error {
public:
    InvariantViolation(std::string invariant, const std::string& detail)
        : Error(invariant + ": " + detail), invariant_(std::move(invariant)) {}
    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

// Non-fatal diagnostics. The default sink writes to stderr.
using WarningSink = std::function<void(const std::string&)>;
void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace tomokit
