#pragma once

#include <stdexcept>
#include <string>

namespace spdcalc {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not match.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input lies outside the domain of the requested operation
/// (non-symmetric input, non-positive spectrum for log, t outside a curve...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A quotient whose denominator vanished.
class UndefinedRatioError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An iterative kernel did not converge or a factorization broke down.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Caller passed an argument outside its documented range.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace spdcalc
