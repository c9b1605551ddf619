#pragma once

#include <stdexcept>
#include <string>

namespace lagerstrom {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An argument is inside the domain but outside what is implemented.
class UnsupportedParameter : public Error {
 public:
  using Error::Error;
};

/// A caller-side contract was violated (e.g. an unconverged profile).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not reach the requested accuracy.
/// The best available estimate is kept so callers can still inspect it.
class AccuracyFailure : public Error {
 public:
  AccuracyFailure(const std::string& what, double best_estimate, double error_estimate)
      : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

class IntegrationFailure : public Error {
 public:
  using Error::Error;
};

class BracketFailure : public Error {
 public:
  using Error::Error;
};

/// The tail of the shooting profile could not be certified within the r-cap.
class ResolutionFailure : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  FitError(const std::string& what, double condition_number)
      : Error(what), condition_number_(condition_number) {}

  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

}  // namespace lagerstrom
