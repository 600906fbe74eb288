#pragma once

#include <utility>

#include "semicouple/geometry.hpp"
#include "semicouple/scales.hpp"

namespace semicouple {

// Two congruent halves D0, D1 of the cuboid
//   D = [0, 2^n)^{axis-1} x [0, 2^{n+1})^{d-axis+1},
// split along `axis` (1-based), with Z0, Z1 points in them.
struct MergeInstance {
  int n = 0;
  int axis = 1;
  int d = 1;
  long long z0 = 0;
  long long z1 = 0;
  CostScale scale = CostScale::power(1.0);
};

Box merge_cuboid(const MergeInstance& inst);
std::pair<Box, Box> merge_halves(const MergeInstance& inst);
// Lebesgue volume of either half: 2^{d(n+1) - axis}.
double merge_half_volume(const MergeInstance& inst);

// Cost of moving the surplus (Z0 - Z1)/2 across the midplane by reflection:
// 2^{-(n+2)} Theta(2^{n+1}) |Z0 - Z1|.
double concave_merge_cost(const MergeInstance& inst);

// Cost of the linear squeeze map on each half under |x - y|^p.
struct LpMergeTerms {
  double first = 0.0;   // 2^{np}/(p+1) Z0 |(Z0 - Z1)/Z|^p
  double second = 0.0;  // 2^{np}/(p+1) Z1 |(Z0 - Z1)/Z|^p
  double total() const { return first + second; }
};
LpMergeTerms lp_merge_terms(const MergeInstance& inst, double p);
double lp_merge_cost(const MergeInstance& inst, double p);

// int_{[0,1)^d} |x|^p dx for d <= 3.
double unit_cube_moment(int d, double p);
// int int_{[0,1)^d x [0,1)^d} |x - y|^p for d <= 3.
double cube_pair_moment(int d, double p);
// Cost of a unit-volume ball around one point: d/(d+p) (Gamma(d/2+1)^{1/d} / sqrt(pi))^p.
double single_point_cost(double p, int d);

// Dilation x -> (Z/alpha)^{1/d} x of the box [0, 2^n)^d carrying mass Z
// onto the box of volume Z: tau'(d,p) 2^{np} Z |(Z/alpha)^{1/d} - 1|^p.
// alpha <= 0 means 2^{nd}.
double rescale_box_cost(int n, int d, double p, long long z, double alpha = 0.0);

// Constants of the L^p recursion.
double kappa1(double p);
double kappa2(double p, int d);
double kappa3(double p, int d);

// Additive increment of the modified-cost recursion from generation n to n+1:
//   concave form: 2^{d/2+1} 2^{-(n+1)(d/2+1)} Theta(2^{n+1})
//   L^p form (in the p-th root): kappa2(p,d) 2^{(n+1)(1-d/2)}
double modified_cost_chain_bound(int n, int d, const CostScale& scale);
double modified_cost_chain_bound_lp(int n, int d, double p);

// Slack in c_n <= c^_n + slack:
//   concave form: sqrt(2d) eps(2^n)
//   L^p form (in the p-th root): kappa3(p,d) 2^{n(1-d/2)}
double comparison_slack(int n, int d, const CostScale& scale);
double comparison_slack_lp(int n, int d, double p);

}  // namespace semicouple
