#include "semicouple/analytic_transports.hpp"

#include <cmath>

#include "semicouple/errors.hpp"
#include "semicouple/numerics.hpp"
#include "semicouple/poisson_moments.hpp"

namespace semicouple {

namespace {

void validate(const MergeInstance& inst) {
  if (inst.d < 1) throw ArgumentError("merge instance needs d >= 1");
  if (inst.n < 0) throw ArgumentError("merge instance needs n >= 0");
  if (inst.axis < 1 || inst.axis > inst.d) throw ArgumentError("merge axis out of range");
  if (inst.z0 < 0 || inst.z1 < 0) throw ArgumentError("merge masses must be nonnegative");
}

void require_low_dim(int d) {
  if (d < 1 || d > 3) throw UnsupportedError("cube moments are tabulated for d in {1, 2, 3}");
}

constexpr double kQuadTol = 1e-12;

}  // namespace

Box merge_cuboid(const MergeInstance& inst) {
  validate(inst);
  Vector extent = Vector::Constant(inst.d, std::ldexp(1.0, inst.n + 1));
  for (int k = 0; k + 1 < inst.axis; ++k) extent[k] = std::ldexp(1.0, inst.n);
  return Box{Vector::Zero(inst.d), extent};
}

std::pair<Box, Box> merge_halves(const MergeInstance& inst) { return cuboid_chain(merge_cuboid(inst), inst.axis); }

double merge_half_volume(const MergeInstance& inst) {
  validate(inst);
  return std::ldexp(1.0, inst.d * (inst.n + 1) - inst.axis);
}

double concave_merge_cost(const MergeInstance& inst) {
  validate(inst);
  const double edge = std::ldexp(1.0, inst.n + 1);
  return std::ldexp(1.0, -(inst.n + 2)) * antiderivative(inst.scale, edge) *
         static_cast<double>(std::llabs(inst.z0 - inst.z1));
}

LpMergeTerms lp_merge_terms(const MergeInstance& inst, double p) {
  validate(inst);
  if (!(p >= 1.0)) throw ArgumentError("L^p merge needs p >= 1");
  const long long z = inst.z0 + inst.z1;
  if (z == 0) return {};
  const double shift = std::pow(std::abs(static_cast<double>(inst.z0 - inst.z1) / static_cast<double>(z)), p);
  const double factor = std::pow(2.0, inst.n * p) / (p + 1.0) * shift;
  return {factor * static_cast<double>(inst.z0), factor * static_cast<double>(inst.z1)};
}

double lp_merge_cost(const MergeInstance& inst, double p) { return lp_merge_terms(inst, p).total(); }

double unit_cube_moment(int d, double p) {
  require_low_dim(d);
  if (!(p >= 0.0)) throw ArgumentError("moment order must be nonnegative");
  if (d == 1) return 1.0 / (p + 1.0);
  if (p == 2.0) return d / 3.0;
  if (d == 2) {
    return numerics::integrate(
        [p](double x) {
          return numerics::integrate([p, x](double y) { return std::pow(x * x + y * y, 0.5 * p); }, 0.0, 1.0, kQuadTol);
        },
        0.0, 1.0, kQuadTol);
  }
  return numerics::integrate(
      [p](double x) {
        return numerics::integrate(
            [p, x](double y) {
              return numerics::integrate([p, x, y](double z) { return std::pow(x * x + y * y + z * z, 0.5 * p); },
                                         0.0, 1.0, kQuadTol);
            },
            0.0, 1.0, kQuadTol);
      },
      0.0, 1.0, kQuadTol);
}

double cube_pair_moment(int d, double p) {
  require_low_dim(d);
  if (!(p >= 0.0)) throw ArgumentError("moment order must be nonnegative");
  if (d == 1) return 2.0 / ((p + 1.0) * (p + 2.0));
  if (p == 2.0) return d / 6.0;
  // each coordinate difference has density 2 (1 - u) on [0, 1] in absolute value
  if (d == 2) {
    return numerics::integrate(
        [p](double u) {
          return numerics::integrate(
              [p, u](double v) { return 4.0 * (1.0 - u) * (1.0 - v) * std::pow(u * u + v * v, 0.5 * p); }, 0.0, 1.0,
              kQuadTol);
        },
        0.0, 1.0, kQuadTol);
  }
  return numerics::integrate(
      [p](double u) {
        return numerics::integrate(
            [p, u](double v) {
              return numerics::integrate(
                  [p, u, v](double w) {
                    return 8.0 * (1.0 - u) * (1.0 - v) * (1.0 - w) * std::pow(u * u + v * v + w * w, 0.5 * p);
                  },
                  0.0, 1.0, kQuadTol);
            },
            0.0, 1.0, kQuadTol);
      },
      0.0, 1.0, kQuadTol);
}

double single_point_cost(double p, int d) {
  if (d < 1) throw ArgumentError("dimension must be positive");
  if (!(p > 0.0)) throw ArgumentError("exponent must be positive");
  const double radius = std::exp(std::lgamma(0.5 * d + 1.0) / d) / std::sqrt(M_PI);
  return d / (d + p) * std::pow(radius, p);
}

double rescale_box_cost(int n, int d, double p, long long z, double alpha) {
  if (n < 0 || d < 1) throw ArgumentError("rescale needs n >= 0 and d >= 1");
  if (z < 0) throw ArgumentError("rescale needs Z >= 0");
  if (alpha <= 0.0) alpha = std::ldexp(1.0, n * d);
  const double ratio = std::pow(static_cast<double>(z) / alpha, 1.0 / d);
  return unit_cube_moment(d, p) * std::pow(2.0, n * p) * static_cast<double>(z) * std::pow(std::abs(ratio - 1.0), p);
}

double kappa1(double p) {
  if (!(p >= 1.0)) throw ArgumentError("kappa1 needs p >= 1");
  return std::pow(2.0, -p) / (p + 1.0) * moment_constant_central(2.0 * p) * moment_constant_inverse(2.0 * (p - 1.0));
}

double kappa2(double p, int d) {
  double sum = 0.0;
  for (int k = 1; k <= d; ++k) sum += std::pow(2.0, 0.5 * k);
  return std::pow(kappa1(p), 1.0 / p) * sum;
}

double kappa3(double p, int d) {
  if (!(p >= 1.0)) throw ArgumentError("kappa3 needs p >= 1");
  // tau' * E[Z^2]^{1/2} / alpha * E[|Z - alpha|^{2p}]^{1/2} / alpha^{p/2}
  const double cube = d <= 3 ? unit_cube_moment(d, p) : std::pow(static_cast<double>(d), 0.5 * p) / (p + 1.0);
  return std::pow(cube * std::sqrt(moment_constant_raw(2.0)) * std::sqrt(moment_constant_central(2.0 * p)), 1.0 / p);
}

double modified_cost_chain_bound(int n, int d, const CostScale& scale) {
  if (n < 0 || d < 1) throw ArgumentError("chain bound needs n >= 0 and d >= 1");
  const double e = 0.5 * d + 1.0;
  return std::pow(2.0, e) * std::pow(2.0, -(n + 1) * e) * antiderivative(scale, std::ldexp(1.0, n + 1));
}

double modified_cost_chain_bound_lp(int n, int d, double p) {
  if (n < 0 || d < 1) throw ArgumentError("chain bound needs n >= 0 and d >= 1");
  return kappa2(p, d) * std::pow(2.0, (n + 1) * (1.0 - 0.5 * d));
}

double comparison_slack(int n, int d, const CostScale& scale) {
  if (n < 0 || d < 1) throw ArgumentError("comparison needs n >= 0 and d >= 1");
  return std::sqrt(2.0 * d) * tail_sup(scale, std::ldexp(1.0, n), d);
}

double comparison_slack_lp(int n, int d, double p) {
  if (n < 0 || d < 1) throw ArgumentError("comparison needs n >= 0 and d >= 1");
  return kappa3(p, d) * std::pow(2.0, n * (1.0 - 0.5 * d));
}

}  // namespace semicouple
