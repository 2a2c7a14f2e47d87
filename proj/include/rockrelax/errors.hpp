#pragma once

#include <stdexcept>
#include <string>

namespace rockrelax {

/// Vector lengths or matrix shapes disagree with the model they are used on.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument lies outside the domain the operation is defined on
/// (a vector that is not in the simplex, a nonfinite cost, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A scenario evaluator returned -inf, which the model rules out.
class ImproperFunctionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Every point of a search grid evaluated to +inf.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The objective fell below the unboundedness threshold.
class UnboundedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A grid or enumeration would exceed the evaluation budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Instance or plan configuration is malformed.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rockrelax
