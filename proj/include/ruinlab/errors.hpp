#ifndef RUINLAB_ERRORS_HPP
#define RUINLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ruinlab {

// Every failure raised by the library derives from Error. The harness maps
// the three families (input, hypothesis, numeric) onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Some admissible intensity violates l * mu < c.
class NetProfitViolation : public Error {
 public:
  using Error::Error;
};

// A theorem's stated assumptions fail for the given model / rule.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

// Base for failures of numerical procedures.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

class NoRoot : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

class DegenerateDenominator : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

class DerivativeUnstable : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

class StratificationError : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

// Acceptance-rejection sampler falls below its documented acceptance floor.
class AcceptanceRateError : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

}  // namespace ruinlab

#endif  // RUINLAB_ERRORS_HPP
