#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semicouple/laguerre.hpp"
#include "semicouple/semicoupling.hpp"

namespace semicouple {

struct CheckReport {
  std::string check_name;
  bool passed = false;
  bool skipped = false;
  double worst_violation = 0.0;
  std::int64_t samples_tested = 0;
  std::string details;
};

inline constexpr double kMonotonicityTolerance = 1e-9;
inline constexpr double kEfficiencyTolerance = 1e-6;
inline constexpr double kDiagramVolumeTolerance = 1e-6;

// Sum c(x_i, y_i) - sum c(x_i, y_{i+1}) over sampled support cycles of length
// 2..max_len, together with the exact maximum over target cycles of length
// <= max_len built from the extreme cells of every target pair.
CheckReport check_cyclical_monotonicity(const TransportPlan& plan, int cycles, int max_len, std::uint64_t seed);
CheckReport check_cyclical_monotonicity(const LaguerreDiagram& diagram, int cycles, int max_len, std::uint64_t seed);

// Chains x_1 .. x_N of used cells closed by an unused cell x_{N+1}:
// sum c(x_i, xi_i) - sum c(x_{i+1}, xi_i), sampled and exact as above.
CheckReport check_sequential_monotonicity(const TransportPlan& plan, int chains, int max_len, std::uint64_t seed);

// Re-solves the restricted problem on each box; worst_violation is 1 - min ratio.
CheckReport check_efficiency(const TransportPlan& plan, const std::vector<Box>& sub_boxes);

CheckReport check_volumes(const TransportPlan& plan);
CheckReport check_volumes(const LaguerreDiagram& diagram);

// Every active cell is wholly assigned or wholly free and the per-target
// tallies match the assignment.
CheckReport check_indicator_marginal(const TransportPlan& plan);

CheckReport check_convexity(const LaguerreDiagram& diagram);

struct CostEstimate {
  int n = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
};

// mean_{n+1} >= mean_n - 3 (stderr_n + stderr_{n+1}) for consecutive entries.
CheckReport check_monotone_costs(const std::vector<CostEstimate>& estimates);

}  // namespace semicouple
