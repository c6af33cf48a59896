#pragma once

#include <stdexcept>
#include <string>

namespace pairspec {

// Base of every failure thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed user input: densities, vectors, configs, domain violations.
struct InputError : Error {
  using Error::Error;
};

// A numerical evaluation failed (non-finite integrand, refinement exhausted).
// `where` is the offending abscissa when one is known.
struct EvaluationError : Error {
  double where;
  bool has_where;
  explicit EvaluationError(const std::string& msg)
      : Error(msg), where(0.0), has_where(false) {}
  EvaluationError(const std::string& msg, double at)
      : Error(msg), where(at), has_where(true) {}
};

// An integral was detected as divergent.
struct DivergenceError : Error {
  using Error::Error;
};

// Operation requested outside its spectral regime (e.g. at a critical coupling).
struct RegimeError : Error {
  using Error::Error;
};

// Two independent numerical routes disagree beyond tolerance.
struct NumericError : Error {
  double value_a, value_b;
  NumericError(const std::string& msg, double a, double b)
      : Error(msg), value_a(a), value_b(b) {}
};

}  // namespace pairspec
