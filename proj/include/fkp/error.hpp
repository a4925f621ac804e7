#pragma once

#include <stdexcept>
#include <string>

namespace fkp {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition was violated by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A formula was evaluated outside its domain (e.g. a vanishing denominator).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Data carries energy on the xi = 0 column where an operator needs it absent.
class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Non-finite state or nonlinear CFL breach during time stepping.
class BlowUp : public Error {
 public:
  BlowUp(const std::string& what, double time_reached)
      : Error(what), time_reached_(time_reached) {}
  double time_reached() const noexcept { return time_reached_; }

 private:
  double time_reached_;
};

}  // namespace fkp
