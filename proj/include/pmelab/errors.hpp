#pragma once

#include <stdexcept>
#include <string>

namespace pmelab {

/// Invalid argument to a numerical routine (length mismatch, out-of-range index, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Grid too coarse to represent the requested modes alias-free.
class ResolutionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base for solver aborts; carries the time at which the abort happened.
class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// The solution touched zero: the equation degenerates there.
class DegenerateRegimeError : public NumericalAbort {
 public:
  using NumericalAbort::NumericalAbort;
};

/// Non-finite values appeared in the state.
class InstabilityError : public NumericalAbort {
 public:
  using NumericalAbort::NumericalAbort;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pmelab
