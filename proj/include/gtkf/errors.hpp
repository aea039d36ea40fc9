#pragma once

#include <stdexcept>
#include <string>

namespace gtkf {

/// Inconsistent dimensions or invalid model/experiment configuration.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Argument outside an operation's domain (index out of range, length mismatch, ...).
class ArgumentError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure: non-PD innovation covariance, simplex non-convergence, ...
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A combinatorial oracle refused to run because its enumeration budget is exceeded.
class BudgetExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised by stack_group for an empty testing group; callers skip the test.
class EmptyGroup : public std::logic_error {
  public:
    EmptyGroup() : std::logic_error("empty testing group") {}
};

} // namespace gtkf
