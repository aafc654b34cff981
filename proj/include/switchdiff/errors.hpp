#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace switchdiff {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on a numerical argument failed (non-positive rate, pole of an MGF, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The operation requires constant drifts in both regimes.
class NonConstantDrift : public DomainError {
public:
    using DomainError::DomainError;
};

class DegenerateInput : public DomainError {
public:
    using DomainError::DomainError;
};

/// A user-supplied drift produced NaN/Inf during integration.
class SimulationError : public Error {
public:
    using Error::Error;
};

enum class ViolationCode {
    non_positive_intensity,
    non_positive_drift_bound,
    bound_violated_at_probe,
    non_finite_field,
    inconsistent_bounds,
    missing_field,
    invalid_parameter,
};

const char* to_string(ViolationCode code);

struct Violation {
    ViolationCode code;
    std::string field;
    std::string message;
    double probe_x = 0.0;  // only meaningful for bound_violated_at_probe
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations);

    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// Malformed configuration document; carries the offending line or key.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::string key)
        : Error(message), line_(line), key_(std::move(key)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& key() const noexcept { return key_; }

private:
    std::size_t line_;
    std::string key_;
};

}  // namespace switchdiff
