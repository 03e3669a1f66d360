#pragma once

#include <stdexcept>
#include <string>

namespace nlw {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Adaptive refinement did not converge (typically a divergent integral).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// The grid does not resolve the requested structure.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// The discretized operator shows a spectrum inconsistent with the continuum.
class DiscretizationAnomaly : public Error {
 public:
  using Error::Error;
};

/// Parameters lie outside the regime where an asymptotic model is valid.
class OutOfRegime : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appeared during time stepping.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// An iterative fit (Newton, eigen-iteration, ...) failed to converge.
class FitFailure : public Error {
 public:
  using Error::Error;
};

/// An ODE integration could not proceed (step size underflow).
class IntegrationFailure : public Error {
 public:
  IntegrationFailure(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Construction of an auxiliary object failed its own verification.
class ConstructionError : public Error {
 public:
  ConstructionError(const std::string& what, int index = 0) : Error(what), index_(index) {}
  /// Index of the violated property, when applicable.
  int index() const noexcept { return index_; }

 private:
  int index_;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ContractViolation(what);
}

}  // namespace nlw
