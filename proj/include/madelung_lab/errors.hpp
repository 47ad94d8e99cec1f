#pragma once

#include <stdexcept>
#include <string>

namespace mlab {

/// Base class of everything the library throws on a violated contract.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGridError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// |q| (or rho) dropped to or below the admissible floor.
class VacuumError : public Error {
 public:
  VacuumError(const std::string& what, double location, double value)
      : Error(what), location_(location), value_(value) {}
  double location() const { return location_; }
  double value() const { return value_; }

 private:
  double location_;
  double value_;
};

/// The reconstructed phase would not be periodic on the grid.
class PeriodicityError : public Error {
 public:
  using Error::Error;
};

class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

class StabilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace mlab
