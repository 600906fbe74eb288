#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "map_oracles.hpp"
#include "semicouple/analytic_transports.hpp"
#include "semicouple/errors.hpp"
#include "semicouple/pointprocess.hpp"
#include "semicouple/poisson_moments.hpp"

using namespace semicouple;

namespace {

MergeInstance inst(int n, int axis, int d, long long z0, long long z1, CostScale s = CostScale::power(1.0)) {
  return MergeInstance{n, axis, d, z0, z1, s};
}

}  // namespace

TEST(MergeGeometry, CuboidAndHalves) {
  const MergeInstance a = inst(1, 2, 3, 0, 0);
  const Box c = merge_cuboid(a);
  EXPECT_EQ(c.extent[0], 2.0);
  EXPECT_EQ(c.extent[1], 4.0);
  EXPECT_EQ(c.extent[2], 4.0);
  const auto [d0, d1] = merge_halves(a);
  EXPECT_EQ(d0.volume(), merge_half_volume(a));
  EXPECT_EQ(d1.lower[1], 2.0);
  EXPECT_EQ(merge_half_volume(a), std::ldexp(1.0, 3 * 2 - 2));
  EXPECT_THROW(merge_cuboid(inst(0, 3, 2, 0, 0)), ArgumentError);
}

TEST(ConcaveMerge, Examples) {
  EXPECT_EQ(concave_merge_cost(inst(2, 1, 2, 5, 5)), 0.0);
  EXPECT_NEAR(concave_merge_cost(inst(0, 1, 1, 2, 0)), 1.0, 1e-15);
  EXPECT_NEAR(concave_merge_cost(inst(1, 1, 2, 3, 1, CostScale::power(0.5))), 4.0 / 3, 1e-13);
}

TEST(LpMerge, Examples) {
  EXPECT_EQ(lp_merge_cost(inst(1, 1, 2, 3, 3), 2.0), 0.0);
  EXPECT_NEAR(lp_merge_cost(inst(0, 1, 1, 1, 0), 1.0), 0.5, 1e-15);
  EXPECT_NEAR(lp_merge_cost(inst(0, 1, 1, 2, 1), 2.0), 1.0 / 9, 1e-15);
  EXPECT_EQ(lp_merge_cost(inst(0, 1, 1, 0, 0), 2.0), 0.0);
  const LpMergeTerms t = lp_merge_terms(inst(2, 1, 2, 3, 1), 1.5);
  EXPECT_NEAR(t.first, 3 * t.second, 1e-15);
  EXPECT_THROW(lp_merge_cost(inst(0, 1, 1, 1, 0), 0.5), ArgumentError);
}

TEST(RescaleBox, Examples) {
  EXPECT_EQ(rescale_box_cost(2, 2, 2.0, 16), 0.0);
  EXPECT_NEAR(rescale_box_cost(0, 1, 1.0, 4, 1.0), 6.0, 1e-14);
  EXPECT_NEAR(rescale_box_cost(0, 2, 2.0, 2, 1.0), 2.0 / 3 * 2 * std::pow(std::sqrt(2.0) - 1, 2), 1e-14);
}

TEST(CubeMoments, ClosedFormsAndBound) {
  EXPECT_NEAR(unit_cube_moment(2, 2), 2.0 / 3, 1e-15);
  EXPECT_NEAR(unit_cube_moment(1, 3), 0.25, 1e-15);
  EXPECT_NEAR(cube_pair_moment(2, 2), 1.0 / 3, 1e-15);
  EXPECT_NEAR(cube_pair_moment(1, 1), 1.0 / 3, 1e-15);
  for (int d = 1; d <= 3; ++d) {
    for (double p : {0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) {
      const double m = unit_cube_moment(d, p);
      EXPECT_NEAR(m, map_oracle::box_power_integral(0, d, p), 1e-9 * m);
      // Jensen on the mean of the squared coordinates; the direction flips at p = 2
      const double jensen = std::pow(d, 0.5 * p) / (p + 1);
      if (p >= 2) {
        EXPECT_LE(m, jensen * (1 + 1e-12));
      } else {
        EXPECT_GE(m, jensen * (1 - 1e-12));
      }
    }
  }
  // E|s - t| for d = 2 against a direct quadruple-free formula: E over the difference density
  const double e2 = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [](double u) {
        return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            [u](double v) { return 4 * (1 - u) * (1 - v) * std::hypot(u, v); }, 0.0, 1.0, 15, 1e-13);
      },
      0.0, 1.0, 15, 1e-13);
  EXPECT_NEAR(cube_pair_moment(2, 1), e2, 1e-10);
  EXPECT_THROW(unit_cube_moment(4, 1), UnsupportedError);
}

TEST(SinglePointCost, KnownValues) {
  EXPECT_NEAR(single_point_cost(2, 2), 1 / (2 * M_PI), 1e-15);
  EXPECT_NEAR(single_point_cost(1, 1), 0.25, 1e-15);
  EXPECT_NEAR(single_point_cost(1, 2), 2.0 / 3 / std::sqrt(M_PI), 1e-15);
  // direct integral over the unit-volume ball in d = 3
  const double r = std::cbrt(3 / (4 * M_PI));
  EXPECT_NEAR(single_point_cost(2, 3), 4 * M_PI * std::pow(r, 5) / 5, 1e-15);
}

TEST(MapCosts, ClosedFormsMatchIntegratedMaps) {
  std::mt19937_64 gen(12);
  std::uniform_int_distribution<int> nn(0, 3), zz(0, 40), dd(1, 3);
  const std::vector<CostScale> concave = {CostScale::power(0.5), CostScale::power(1.0), CostScale::concave_log(2, 1.0),
                                          CostScale::power(2.0)};
  for (int trial = 0; trial < 50; ++trial) {
    const int d = dd(gen);
    const int axis = 1 + static_cast<int>(gen() % static_cast<unsigned>(d));
    MergeInstance a = inst(nn(gen), axis, d, zz(gen), zz(gen), concave[static_cast<std::size_t>(trial % 4)]);
    const double cf = concave_merge_cost(a), num = map_oracle::reflection_map_cost(a);
    EXPECT_LE(std::abs(cf - num), 1e-8 * std::max(cf, 1e-300)) << trial;
    const double p = 1.0 + 0.5 * (trial % 5);
    const double lp = lp_merge_cost(a, p), lpn = map_oracle::squeeze_map_cost(a, p);
    EXPECT_LE(std::abs(lp - lpn), 1e-8 * std::max(lp, 1e-300)) << trial;
    const long long z = zz(gen) * (1 << (a.n * d)) / 8;
    const double rb = rescale_box_cost(a.n, d, p, z), rbn = map_oracle::dilation_map_cost(a.n, d, p, z);
    EXPECT_LE(std::abs(rb - rbn), 1e-8 * std::max(rb, 1e-300)) << trial;
  }
}

TEST(MapCosts, GridSolveBelowClosedForm) {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 8; ++trial) {
    const int d = 1 + trial % 2;
    const int m = d == 1 ? 32 : 8;
    MergeInstance a = inst(0, 1, d, 1 + static_cast<long long>(gen() % 6), 1 + static_cast<long long>(gen() % 6),
                           CostScale::power(0.5));
    const auto c = map_oracle::grid_merge(a, m, false, 0.0);
    EXPECT_TRUE(map_oracle::grid_merge_within(c, false, 0.0)) << c.solver_cost << " " << c.closed_form;
    const auto l = map_oracle::grid_merge(a, m, true, 2.0);
    EXPECT_TRUE(map_oracle::grid_merge_within(l, true, 2.0)) << l.solver_cost << " " << l.closed_form;
  }
}

TEST(MapCosts, SqueezeIsOptimalForQuadraticOnTheLine) {
  // the squeeze map is the monotone rearrangement, so the lattice optimum approaches it at rate 1/m
  const MergeInstance a = inst(0, 1, 1, 3, 1);
  const double exact = lp_merge_cost(a, 2.0);
  double prev_gap = 1e9;
  for (int m : {16, 32, 64}) {
    const auto g = map_oracle::grid_merge(a, m, true, 2.0);
    const double gap = std::abs(g.solver_cost - exact);
    EXPECT_LE(gap, 2.0 / m * std::sqrt(exact) + 1.0 / (m * m));
    EXPECT_LE(gap, prev_gap + 1e-15);
    prev_gap = gap;
  }
}

TEST(MapCosts, PoissonAverageOfReflectionCost) {
  const int n = 1, d = 2;
  const MergeInstance shape = inst(n, 1, d, 0, 0, CostScale::power(0.5));
  const double alpha0 = merge_half_volume(shape);
  CounterRng rng(5, 0, 9);
  const int reps = 10000;
  double s = 0, s2 = 0;
  for (int r = 0; r < reps; ++r) {
    MergeInstance a = shape;
    a.z0 = sample_poisson(rng, alpha0);
    a.z1 = sample_poisson(rng, alpha0);
    const double v = concave_merge_cost(a);
    s += v;
    s2 += v * v;
  }
  const double mean = s / reps;
  const double se = std::sqrt((s2 / reps - mean * mean) / (reps - 1));
  const double bound = std::ldexp(1.0, -(n + 1)) * antiderivative(shape.scale, std::ldexp(1.0, n + 1)) * std::sqrt(alpha0);
  EXPECT_LE(mean, bound + 3 * se);
}

TEST(Recursion, IncrementsAndSlacks) {
  EXPECT_NEAR(modified_cost_chain_bound(0, 2, CostScale::power(0.5)), 2.0 / 3 * std::pow(2.0, 1.5), 1e-13);
  EXPECT_NEAR(kappa1(1.0), 0.5, 1e-15);
  EXPECT_NEAR(kappa2(1.0, 3), 0.5 * (std::sqrt(2.0) + 2 + std::sqrt(8.0)), 1e-14);
  EXPECT_NEAR(modified_cost_chain_bound_lp(1, 3, 1.0), kappa2(1.0, 3) * 0.5, 1e-15);
  double prev = 1e300;
  for (int d = 3; d < 40; ++d) {
    const double v = modified_cost_chain_bound_lp(2, d, 1.0);
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_LT(prev, 1e-6);
  EXPECT_NEAR(comparison_slack(0, 2, CostScale::power(0.5)), 2.0, 1e-12);
  EXPECT_NEAR(comparison_slack(1, 2, CostScale::power(0.5)), 2.0 / std::sqrt(2.0), 1e-12);
  // kappa3 for p = 1, d = 2: unit-square moment times sqrt(C1(2) C3(2))
  EXPECT_NEAR(kappa3(1.0, 2), unit_cube_moment(2, 1) * std::sqrt(4.0 * 2.0), 1e-12);
  EXPECT_NEAR(comparison_slack_lp(0, 3, 1.0), kappa3(1.0, 3), 1e-15);
}
