#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mee {

/// Base of all library errors. The CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument: alpha out of range, bad index, inadmissible shift, ...
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Non-finite input or result (log of zero, NaN samples, diverging risk).
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what, std::vector<double> shifts = {})
        : Error(what), shifts_(std::move(shifts)) {}

    /// Shift assignment that produced the failure, when one was involved.
    const std::vector<double>& shifts() const noexcept { return shifts_; }

private:
    std::vector<double> shifts_;
};

/// Malformed or inconsistent experiment configuration / input file.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace mee
