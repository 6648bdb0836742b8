#pragma once

#include <stdexcept>
#include <string>

namespace incentive {

/// Raised when caller-supplied data violates a documented precondition.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a solver reaches a state its invariants say cannot happen.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace incentive
