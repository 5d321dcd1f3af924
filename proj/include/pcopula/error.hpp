#pragma once

#include <stdexcept>
#include <string>

namespace pcop {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A root bracket without a sign change.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// h-function inversion failed; indicates a formula bug for valid specs.
class InversionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integrand or other callback returned a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed caller input (length mismatch, bad CSV, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Statistic undefined for the given sample (too short, zero variance).
class UndefinedStatistic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pcop
