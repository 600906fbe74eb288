#pragma once

// Hand-damaged copies of optimal plans for the checker negative controls.

#include <optional>

#include "semicouple/semicoupling.hpp"

namespace controls {

using namespace semicouple;

inline double cell_cost(const TransportPlan& p, std::size_t c, int j) {
  return p.scale.from_squared(squared_distance(p.grid.center(c), p.pattern.point(j)));
}

// For every pair of targets the cell of each nearest to its own target is
// handed to the other one; the pair with the largest cost increase is kept.
inline std::optional<TransportPlan> swap_targets(const TransportPlan& plan) {
  const int k = plan.pattern.size();
  std::vector<std::optional<std::size_t>> nearest(static_cast<std::size_t>(k));
  for (std::size_t c = 0; c < plan.assignment.size(); ++c) {
    const int j = plan.assignment[c];
    if (j < 0) continue;
    auto& n = nearest[static_cast<std::size_t>(j)];
    if (!n || cell_cost(plan, c, j) < cell_cost(plan, *n, j)) n = c;
  }
  double best = 0.0;
  std::size_t ba = 0, bb = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const auto& a = nearest[static_cast<std::size_t>(i)];
      const auto& b = nearest[static_cast<std::size_t>(j)];
      if (!a || !b) continue;
      const double inc = cell_cost(plan, *a, j) + cell_cost(plan, *b, i) - cell_cost(plan, *a, i) - cell_cost(plan, *b, j);
      if (inc > best) {
        best = inc;
        ba = *a;
        bb = *b;
      }
    }
  }
  if (best <= 0.0) return std::nullopt;
  TransportPlan out = plan;
  std::swap(out.assignment[ba], out.assignment[bb]);
  out.total_cost += best * plan.grid.cell_mass();
  return out;
}

// The used cell nearest to some target is freed and the farthest free cell
// takes its place.
inline std::optional<TransportPlan> swap_used_and_free(const TransportPlan& plan) {
  for (int j = 0; j < plan.pattern.size(); ++j) {
    std::optional<std::size_t> near, far;
    for (std::size_t c = 0; c < plan.assignment.size(); ++c) {
      if (plan.assignment[c] == j && (!near || cell_cost(plan, c, j) < cell_cost(plan, *near, j))) near = c;
      if (plan.assignment[c] == kCemetery && (!far || cell_cost(plan, c, j) > cell_cost(plan, *far, j))) far = c;
    }
    if (near && far && cell_cost(plan, *far, j) > cell_cost(plan, *near, j)) {
      TransportPlan out = plan;
      out.assignment[*near] = kCemetery;
      out.assignment[*far] = j;
      out.total_cost += (cell_cost(plan, *far, j) - cell_cost(plan, *near, j)) * plan.grid.cell_mass();
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace controls
