#pragma once

#include <string>
#include <utility>
#include <vector>

namespace semicouple {

// Radial cost scale theta: c(x, y) = theta(|x - y|).
//
// Three families are supported. All of them satisfy theta(0) = 0 and are
// strictly increasing and unbounded; the non-power kinds are validated
// numerically when they are built.
//
//   power(p)            theta(r) = r^p
//   concave_log(d, a)   theta(r) = r^{d/2} (1 + log(1 + r))^{-a},  a in (0, 2]
//   table(points)       monotone piecewise-linear through (r, theta) pairs,
//                       extended linearly past the last breakpoint
class CostScale {
 public:
  enum class Kind { Power, ConcaveLog, Table };

  static CostScale power(double p);
  static CostScale concave_log(int dimension, double alpha);
  static CostScale table(std::vector<std::pair<double, double>> breakpoints);

  Kind kind() const { return kind_; }
  // Exponent of the power kind; for concave_log the leading exponent d/2.
  double exponent() const { return p_; }
  double alpha() const { return alpha_; }
  int dimension_hint() const { return dim_; }
  const std::vector<std::pair<double, double>>& breakpoints() const { return table_; }
  // Smallest probed radius beyond which the concave_log scale is concave.
  double concavity_onset() const { return concave_from_; }

  double operator()(double r) const;
  // theta evaluated from a squared distance; avoids the sqrt for even powers.
  double from_squared(double r2) const;

  // short id used in CSV rows, e.g. "power:2"
  std::string id() const;

  bool is_power(double p) const { return kind_ == Kind::Power && p_ == p && unit_multipliers(); }
  bool unit_multipliers() const { return outer_ == 1.0 && inner_ == 1.0; }
  // theta(r) = outer * base(inner * r)
  double outer() const { return outer_; }
  double inner() const { return inner_; }
  // r -> outer * theta(inner * r); both must be positive
  CostScale with_multipliers(double outer, double inner) const;

  friend CostScale rescaled(const CostScale& scale, double beta, int d);
  friend double antiderivative(const CostScale& scale, double r);

 private:
  CostScale() = default;
  double base(double r) const;
  double base_antiderivative(double r) const;

  Kind kind_ = Kind::Power;
  double p_ = 1.0;
  double alpha_ = 0.0;
  int dim_ = 0;
  double concave_from_ = 0.0;
  double outer_ = 1.0;
  double inner_ = 1.0;
  std::vector<std::pair<double, double>> table_;
};

// theta(r). Throws DomainError for r < 0.
double eval(const CostScale& scale, double r);

// Theta(r) = int_0^r theta(s) ds; closed form for powers and tables, adaptive
// quadrature (relative error <= 1e-10) for concave_log.
double antiderivative(const CostScale& scale, double r);

// epsilon(r) = sup_{s >= r} theta(s) / s^{d/2}, taken over [r, 1e6 r] on a
// 4096-point geometric grid. For powers the ratio is monotone, so the endpoint
// values are exact.
double tail_sup(const CostScale& scale, double r, int d);

// r -> beta * theta(beta^{1/d} r): the scale under which a beta-intensity problem
// costs the same as its contraction to unit intensity with masses beta.
CostScale rescaled(const CostScale& scale, double beta, int d);

}  // namespace semicouple
