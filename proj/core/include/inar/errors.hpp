#pragma once

#include <stdexcept>
#include <string>

namespace inar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An infinite series (offspring means or variances) does not converge.
class DivergentSeries : public Error {
 public:
  using Error::Error;
};

/// A standing model assumption is violated. `item()` names it ("a", "b1", "b2", "c").
class AssumptionViolation : public Error {
 public:
  AssumptionViolation(std::string item, const std::string& what)
      : Error(what), item_(std::move(item)) {}
  const std::string& item() const noexcept { return item_; }

 private:
  std::string item_;
};

/// F(x) = theta has no solution (theta beyond the critical tilt).
class NoSolution : public Error {
 public:
  using Error::Error;
};

/// Model has no randomness where a positive variance is required.
class DegenerateModel : public Error {
 public:
  using Error::Error;
};

class CountOverflow : public Error {
 public:
  using Error::Error;
};

class FingerprintMismatch : public Error {
 public:
  using Error::Error;
};

class UnboundedSupport : public Error {
 public:
  using Error::Error;
};

class StateExplosion : public Error {
 public:
  using Error::Error;
};

/// A computed table entry broke a proven bound. Signals a bug, not bad input.
class BoundViolation : public Error {
 public:
  using Error::Error;
};

class DivergentMgf : public Error {
 public:
  using Error::Error;
};

class InsufficientTailMass : public Error {
 public:
  using Error::Error;
};

}  // namespace inar
