#pragma once

#include <stdexcept>
#include <string>

namespace smar {

// Every failure raised by the library derives from Error so callers (and the
// CLI exit-code mapping) can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments: out-of-range orders, invalid spans, malformed configs.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A complex (inverse) root without a matching conjugate.
class ConjugateViolation : public Error {
 public:
  using Error::Error;
};

// Root finder or other iterative scheme failed; carries the final residual.
class NumericFailure : public Error {
 public:
  NumericFailure(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// A polynomial with a root on or inside the unit circle where stationarity
// is required.
class NonStationary : public Error {
 public:
  using Error::Error;
};

class UnsupportedMultiplicity : public Error {
 public:
  using Error::Error;
};

// Coincident causal/noncausal pole product equal to one.
class Degeneracy : public Error {
 public:
  using Error::Error;
};

// Input outside the domain of a function (zero argument, non-finite value).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Data that carries no information: constant, all-zero, or empty series.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

// Singular least-squares design.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

class NoFeasibleStart : public Error {
 public:
  using Error::Error;
};

// File and parse problems in ingestion.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace smar
