#pragma once

#include <stdexcept>
#include <string>

namespace asynczoo {

// Bad argument or configuration (wrong length, out-of-domain parameter, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Component or coordinate index outside its range.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// The problem does not expose the requested oracle (e.g. gradients of a
// zeroth-order-only black box).
class UnsupportedOracle : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A theoretical prerequisite of the step-size analysis is violated
// (staleness above the ceiling, step size failing the theta condition).
class PrerequisiteViolated : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace asynczoo
