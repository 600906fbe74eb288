#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "semicouple/geometry.hpp"
#include "semicouple/scales.hpp"
#include "semicouple/transport_flow.hpp"

namespace semicouple {

inline constexpr int kCemetery = -1;
inline constexpr int kInactive = -2;

// Summed in coordinate order; solver and tests share it so that integer costs
// agree bit for bit.
template <typename A, typename B>
double squared_distance(const A& a, const B& b) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    acc += t * t;
  }
  return acc;
}

// Costs are rounded to multiples of 1 / cost_unit.
inline std::int64_t integer_cost(const CostScale& scale, double squared_dist, double cost_unit) {
  return static_cast<std::int64_t>(std::llround(scale.from_squared(squared_dist) * cost_unit));
}

// Integer units per unit of theta for distances up to `max_distance`: keeps
// every rounded cost below 2^50, a relative resolution of about 1e-15.
double cost_unit_for(const CostScale& scale, double max_distance);

struct DualCertificate {
  std::vector<std::int64_t> target_potential;
  std::int64_t max_violation = 0;
  std::uint64_t pairs_checked = 0;
  // re-solves with a doubled arc radius before the certificate held
  int radius_doublings = 0;
  bool verified = false;
};

struct TransportPlan {
  GridMeasure grid;
  PointPattern pattern;
  CostScale scale;
  // per grid cell: target index, kCemetery, or kInactive for masked cells
  std::vector<int> assignment;
  std::vector<std::int64_t> target_received;  // in grid cells
  std::vector<std::int64_t> target_demand;    // in grid cells
  double total_cost = 0.0;
  double cost_unit = 1.0;
  std::int64_t integer_cost = 0;

  double received_mass(int target) const {
    return static_cast<double>(target_received[static_cast<std::size_t>(target)]) * grid.cell_mass();
  }
  std::size_t used_cells() const;
};

struct SolveReport {
  TransportPlan plan;
  long iterations = 0;
  DualCertificate certificate;
  double runtime_ms = 0.0;
};

struct SolveOptions {
  // starting arc radius per target; <= 0 picks one from the local target mass
  double cut_radius = 0.0;
  int max_radius_doublings = 16;
};

// Optimal semicoupling of the grid's active cells and the pattern. Each
// target needs mass(target) / cell_mass whole cells.
SolveReport solve_semicoupling(const GridMeasure& grid, const PointPattern& pattern, const CostScale& scale,
                               const SolveOptions& options = {});

// Some used cell lies on the outer layer of the grid window.
bool touches_window_boundary(const TransportPlan& plan);

// Integer-unit transport between two discrete measures. With semicoupling set,
// source units may stay unused at zero cost; otherwise totals must match.
struct DiscreteMeasure {
  PointMatrix points;
  std::vector<std::int64_t> units;
};

struct DiscreteTransport {
  // per source point, the sinks it ships to and how many units
  std::vector<std::vector<flow::FlowEntry>> flows;
  std::vector<std::int64_t> unused;
  double unit_mass = 1.0;
  double total_cost = 0.0;
  double cost_unit = 1.0;
  std::int64_t integer_cost = 0;
  long iterations = 0;
  DualCertificate certificate;
};

// `cut_radius` per sink restricts the arcs offered first; empty means all
// pairs. Radii grow until the dual certificate holds over all pairs.
DiscreteTransport solve_discrete_transport(const DiscreteMeasure& source, const DiscreteMeasure& sink,
                                           const CostScale& scale, double unit_mass, bool semicoupling,
                                           std::vector<double> cut_radius = {}, int max_radius_doublings = 16);

struct BalancedPlan {
  GridMeasure source;
  PointPattern pattern;
  CostScale scale;
  // per grid cell (empty for inactive cells)
  std::vector<std::vector<flow::FlowEntry>> flows;
  std::int64_t units_per_cell = 0;
  std::vector<std::int64_t> target_units;
  double unit_mass = 0.0;
  double total_cost = 0.0;
  double cost_unit = 1.0;
  std::int64_t integer_cost = 0;
};

struct BalancedReport {
  BalancedPlan plan;
  long iterations = 0;
  DualCertificate certificate;
  double runtime_ms = 0.0;
};

// Optimal coupling of the grid measure (uniform over active cells with the
// grid's cell mass) and the pattern; total masses must agree.
BalancedReport solve_balanced(const GridMeasure& source, const PointPattern& pattern, const CostScale& scale);

struct RestrictedProblem {
  GridMeasure lambda;       // cells not shipped to targets outside the region
  PointPattern sub_pattern;
  double sub_cost = 0.0;    // cost of the plan's pairs with target in the region
  std::vector<int> target_map;  // sub-pattern index -> plan target index
};

RestrictedProblem restrict_plan(const TransportPlan& plan, const Box& region);

}  // namespace semicouple
