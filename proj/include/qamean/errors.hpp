#pragma once

#include <stdexcept>
#include <string>

namespace qam {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed call: empty vectors, mismatched domains, bad option values.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the working interval of a generator or mean.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Value outside the range of a generator (inversion).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// f'' vanishes (relative to the curvature scale) on the whole grid.
class DegenerateSecondDerivative : public Error {
 public:
  using Error::Error;
};

/// f'' changes sign or vanishes at some grid point.
class SignChange : public Error {
 public:
  SignChange(const std::string& what, double x) : Error(what), x_(x) {}
  double x() const noexcept { return x_; }

 private:
  double x_;
};

/// Envelope profile m has the wrong sign for reconstruction.
class NonpositiveM : public Error {
 public:
  using Error::Error;
};

}  // namespace qam
