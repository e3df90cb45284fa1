#pragma once

#include <stdexcept>
#include <string>

namespace orf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside an operation's domain (zero vectors, negative times, bad lengths).
class DegenerateInput : public Error {
public:
    using Error::Error;
};

/// A beat tone would exceed the Nyquist limit of the dechirped signal.
class AliasRisk : public Error {
public:
    using Error::Error;
};

/// Invalid or inconsistent configuration. `field()` holds the dotted path of the
/// offending key when it is known.
class ConfigurationError : public Error {
public:
    explicit ConfigurationError(const std::string& message, std::string field = {})
        : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Echo level lies above the calibration curve by more than the noise allowance.
class OutOfCalibration : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Wraps an error raised inside a control cycle with the cycle timestamp.
/// The original exception is nested (see std::rethrow_if_nested).
class CycleError : public Error {
public:
    CycleError(double t_s, const std::string& what)
        : Error("cycle t=" + std::to_string(t_s) + " s: " + what), t_s_(t_s) {}

    double time_s() const noexcept { return t_s_; }

private:
    double t_s_;
};

}  // namespace orf
