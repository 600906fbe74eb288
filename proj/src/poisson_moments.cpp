#include "semicouple/poisson_moments.hpp"

#include <cmath>
#include <functional>
#include <vector>

#include "semicouple/errors.hpp"

namespace semicouple {

namespace {

constexpr int kMaxTouchard = 20;

long double binomial(int n, int k) {
  long double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long double touchard(long double alpha, int n) {
  std::vector<long double> t(static_cast<std::size_t>(n) + 1, 0);
  t[0] = 1;
  for (int m = 0; m < n; ++m) {
    long double acc = 0;
    for (int k = 0; k <= m; ++k) acc += binomial(m, k) * t[static_cast<std::size_t>(k)];
    t[static_cast<std::size_t>(m) + 1] = alpha * acc;
  }
  return t[static_cast<std::size_t>(n)];
}

// sum_{j >= first} f(j) P(Z = j). The tail beyond the mode decays at least
// geometrically once j > 2 alpha, so we stop when a term falls below tol/16.
long double poisson_series(double alpha, int first, const std::function<long double(long double)>& f, double tol) {
  const long double la = std::log(static_cast<long double>(alpha));
  long double acc = 0;
  const int floor_j = static_cast<int>(alpha + 20.0 * std::sqrt(alpha) + 40.0);
  for (int j = first;; ++j) {
    const long double jl = j;
    const long double w = std::exp(-static_cast<long double>(alpha) + jl * la - std::lgamma(jl + 1));
    const long double term = w * f(jl);
    acc += term;
    if (j > floor_j && j > 2.0 * alpha && std::abs(term) < tol / 16) break;
    if (j > 100000) throw ConvergenceError("Poisson series did not converge", static_cast<double>(term), j);
  }
  return acc;
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ArgumentError("Poisson parameter must be positive");
}

}  // namespace

double poisson_raw_moment(double alpha, int n) {
  require_alpha(alpha);
  if (n < 0 || n > kMaxTouchard) throw ArgumentError("raw moment order must lie in [0, 20]");
  return static_cast<double>(touchard(alpha, n));
}

double poisson_central_moment(double alpha, int p) {
  require_alpha(alpha);
  if (p != 2 && p != 4 && p != 6 && p != 8) throw ArgumentError("central moment order must be 2, 4, 6 or 8");
  long double acc = 0;
  const long double a = alpha;
  for (int k = 0; k <= p; ++k) {
    acc += binomial(p, k) * touchard(a, k) * std::pow(-a, p - k);
  }
  return static_cast<double>(acc);
}

double poisson_inverse_moment(double alpha, double p, double tol) {
  require_alpha(alpha);
  if (!(p >= 0.0)) throw ArgumentError("inverse moment order must be nonnegative");
  const long double pl = p;
  return static_cast<double>(poisson_series(alpha, 1, [pl](long double j) { return std::pow(j, -pl); }, tol));
}

double poisson_abs_moment(double alpha, double p, double tol) {
  require_alpha(alpha);
  if (!(p >= 0.0)) throw ArgumentError("moment order must be nonnegative");
  const long double pl = p;
  return static_cast<double>(
      poisson_series(alpha, p == 0.0 ? 0 : 1, [pl](long double j) { return std::pow(j, pl); }, tol));
}

double poisson_abs_central_moment(double alpha, double p, double tol) {
  require_alpha(alpha);
  if (!(p >= 0.0)) throw ArgumentError("moment order must be nonnegative");
  const long double pl = p;
  const long double a = alpha;
  // scale the tolerance: |j - alpha|^p grows, the series tail is still geometric
  return static_cast<double>(
      poisson_series(alpha, 0, [pl, a](long double j) { return std::pow(std::abs(j - a), pl); }, tol));
}

double moment_constant_raw(double p) { return std::pow(std::ceil(p), p); }

double moment_constant_raw_alt(double p) { return std::pow(2.0, p - 1.0) * std::tgamma(std::ceil(p)); }

double moment_constant_inverse(double p) { return std::tgamma(std::ceil(p) + 2.0); }

double moment_constant_central(double p) { return std::pow(2.0, p - 1.0) * std::tgamma(2.0 * std::ceil(p / 2.0)); }

MomentReport check_moment_bounds(double alpha, double p) {
  if (!(alpha >= 1.0)) throw ArgumentError("moment bounds need alpha >= 1");
  if (!(p > 0.0)) throw ArgumentError("moment bounds need p > 0");
  MomentReport r;
  r.p = p;
  r.alpha = alpha;
  const bool integral = p == std::floor(p) && p <= kMaxTouchard;
  r.raw_moment = integral ? poisson_raw_moment(alpha, static_cast<int>(p)) : poisson_abs_moment(alpha, p);
  const bool even = integral && static_cast<int>(p) % 2 == 0 && p <= 8;
  r.central_moment = even ? poisson_central_moment(alpha, static_cast<int>(p)) : poisson_abs_central_moment(alpha, p);
  r.inverse_moment = poisson_inverse_moment(alpha, p);
  r.raw_constant = moment_constant_raw(p);
  r.raw_constant_alt = moment_constant_raw_alt(p);
  r.inverse_constant = moment_constant_inverse(p);
  r.central_constant = moment_constant_central(p);
  r.raw_ok = r.raw_moment <= r.raw_constant * std::pow(alpha, p);
  r.raw_alt_ok = r.raw_moment <= r.raw_constant_alt * std::pow(alpha, p);
  r.inverse_ok = r.inverse_moment <= r.inverse_constant * std::pow(alpha, -p);
  r.central_ok = r.central_moment <= r.central_constant * std::pow(alpha, 0.5 * p);
  r.bound_satisfied = r.raw_ok && r.inverse_ok && r.central_ok;
  return r;
}

double rate_function(double beta, double t) {
  if (!(t > 0.0)) throw ArgumentError("rate function needs t > 0");
  if (!(beta > 0.0 && beta <= 1.0)) throw ArgumentError("rate function needs beta in (0, 1]");
  return t * std::log(t / beta) - t + beta;
}

}  // namespace semicouple
