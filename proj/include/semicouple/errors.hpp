#pragma once

#include <stdexcept>
#include <string>

namespace semicouple {

// Precondition on an argument violated (wrong length, bad axis, bad quantization).
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Value outside the mathematical domain of a function (negative radius, t <= 0).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Transport problem has no feasible solution (not enough source mass).
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested combination is outside what a solver handles (e.g. Laguerre with p != 2).
struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative solver stopped without reaching its tolerance.
struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual(residual), iterations(iterations) {}
  double residual;
  int iterations;
};

}  // namespace semicouple
