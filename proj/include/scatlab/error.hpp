#ifndef SCATLAB_ERROR_HPP
#define SCATLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace scatlab {

/// Base of every error raised by the library. Numerical failures derive from
/// this directly; malformed user input derives from UsageError.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input (specs, config files, arguments). The CLI maps this to
/// exit code 1; every other Error maps to 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ResolutionError : public Error {
 public:
  using Error::Error;
};

class SingularSystemError : public Error {
 public:
  SingularSystemError(const std::string& what, double rcond)
      : Error(what), rcond_(rcond) {}
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

class MismatchError : public Error {
 public:
  using Error::Error;
};

class ProximityError : public Error {
 public:
  using Error::Error;
};

class TruncationError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class DisconnectedDomainError : public Error {
 public:
  using Error::Error;
};

class UnsupportedRegionError : public Error {
 public:
  using Error::Error;
};

class PositivityError : public Error {
 public:
  using Error::Error;
};

class OutOfRegionError : public Error {
 public:
  using Error::Error;
};

}  // namespace scatlab

#endif  // SCATLAB_ERROR_HPP
