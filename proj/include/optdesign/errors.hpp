#pragma once

#include <stdexcept>
#include <string>

namespace optdesign {

/// A parameter value lies outside the admissible range of a model or prior.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed arguments: wrong arity, invalid grid sizes, bad CLI flags.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The candidate grid cannot carry a nonsingular design.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every weight of a design fell below the support floor.
class DegenerateDesignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A quantity that must be nonsingular by construction was singular.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The information matrix at the design is singular where a nonsingular one is required.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace optdesign
