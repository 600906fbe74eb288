#pragma once

namespace semicouple {

// E[Z^n] for Z ~ Poisson(alpha), via the Touchard recursion. n <= 20.
double poisson_raw_moment(double alpha, int n);

// E[(Z - alpha)^p] for even p in {2, 4, 6, 8}, expanded over raw moments.
double poisson_central_moment(double alpha, int p);

// E[Z^{-p} 1{Z > 0}], summed until the remaining tail is below tol.
double poisson_inverse_moment(double alpha, double p, double tol = 1e-14);

// E[Z^p] and E[|Z - alpha|^p] for real p >= 0 by direct series summation.
double poisson_abs_moment(double alpha, double p, double tol = 1e-14);
double poisson_abs_central_moment(double alpha, double p, double tol = 1e-14);

// Constants of the three Poisson moment bounds
//   E[Z^p]               <= C1(p) alpha^p
//   E[Z^{-p} 1{Z > 0}]   <= C2(p) alpha^{-p}
//   E[|Z - alpha|^p]     <= C3(p) alpha^{p/2}
// valid for alpha >= 1.
double moment_constant_raw(double p);          // ceil(p)^p
double moment_constant_raw_alt(double p);      // 2^{p-1} (ceil(p) - 1)!
double moment_constant_inverse(double p);      // (ceil(p) + 1)!
double moment_constant_central(double p);      // 2^{p-1} (2 ceil(p/2) - 1)!

struct MomentReport {
  double p = 0;
  double alpha = 0;
  double raw_moment = 0;
  double central_moment = 0;  // absolute central moment
  double inverse_moment = 0;
  double raw_constant = 0;
  double raw_constant_alt = 0;
  double inverse_constant = 0;
  double central_constant = 0;
  bool raw_ok = false;
  bool raw_alt_ok = false;
  bool inverse_ok = false;
  bool central_ok = false;
  // all three bounds hold with the primary constants
  bool bound_satisfied = false;
};

MomentReport check_moment_bounds(double alpha, double p);

// t log(t / beta) - t + beta
double rate_function(double beta, double t);

}  // namespace semicouple
