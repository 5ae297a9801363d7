#pragma once

#include <stdexcept>

namespace esrtwin {

/// Input outside the mathematical domain of an operation (negative field, T <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Instrument limit exceeded (lens field ceiling, field below remanence).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Invalid configuration or sweep plan.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by spectrum analysis when the trace does not contain what was asked for.
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace esrtwin
