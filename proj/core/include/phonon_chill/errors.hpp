#pragma once

#include <stdexcept>
#include <string>

namespace phonon_chill {

// Base for every error raised by the library. The CLI maps ConfigError to
// exit status 2 and everything else to 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user input: malformed scheme parameters, unknown presets, bad
// dimensions handed to a builder.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Generic numerical failure (dimension mismatch inside a kernel, trace drift,
// non-convergence).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class FullRankError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateKernelError : public NumericalError {
 public:
  DegenerateKernelError(const std::string& what, int kernel_dimension)
      : NumericalError(what), kernel_dimension_(kernel_dimension) {}
  int kernel_dimension() const noexcept { return kernel_dimension_; }

 private:
  int kernel_dimension_;
};

// Adaptive integrator gave up; `time()` is the simulation time reached.
class StepSizeUnderflow : public NumericalError {
 public:
  StepSizeUnderflow(const std::string& what, double time)
      : NumericalError(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class HeatingDominatedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace phonon_chill
