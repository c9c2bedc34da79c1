#pragma once

#include <stdexcept>
#include <string>

namespace tecusum {

/// Bad argument supplied by a caller (non-finite sample, ragged row, ...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operation applied to a state that cannot answer it (e.g. empty history).
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Invalid or inconsistent configuration; message names the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Threshold search could not bracket or converge.
class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A run-length measurement ran out of samples before enough alarms were
/// seen. Carries the best lower bound on the ARL implied by the samples
/// consumed so far.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, double arl_lower_bound)
        : std::runtime_error(what), arl_lower_bound_(arl_lower_bound) {}

    double arl_lower_bound() const { return arl_lower_bound_; }

private:
    double arl_lower_bound_;
};

} // namespace tecusum
