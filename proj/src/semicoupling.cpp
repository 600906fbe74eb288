#include "semicouple/semicoupling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "semicouple/errors.hpp"

namespace semicouple {

namespace {

constexpr double kMaxIntegerCost = 0x1.0p50;

struct PairModel {
  const PointMatrix& source;
  const PointMatrix& sink;
  const CostScale& scale;
  double unit;
  std::vector<double> radius2;  // empty: every pair is an arc

  double dist2(int i, int j) const { return squared_distance(source.col(i), sink.col(j)); }
  std::int64_t cost(int i, int j) const { return integer_cost(scale, dist2(i, j), unit); }
  bool has_arc(int i, int j) const {
    return radius2.empty() || dist2(i, j) <= radius2[static_cast<std::size_t>(j)];
  }
};

double bounding_diameter(const PointMatrix& a, const PointMatrix& b) {
  const Eigen::Index d = a.rows();
  if (a.cols() == 0 && b.cols() == 0) return 0.0;
  Vector lo = Vector::Constant(d, std::numeric_limits<double>::infinity());
  Vector hi = -lo;
  for (const PointMatrix* m : {&a, &b}) {
    if (m->cols() == 0) continue;
    lo = lo.cwiseMin(m->rowwise().minCoeff());
    hi = hi.cwiseMax(m->rowwise().maxCoeff());
  }
  return (hi - lo).norm();
}

double ball_radius(double volume, int d) {
  switch (d) {
    case 1:
      return 0.5 * volume;
    case 2:
      return std::sqrt(volume / M_PI);
    default:
      return std::cbrt(volume * 3.0 / (4.0 * M_PI));
  }
}

std::int64_t saturating(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max()) return std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(v);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

double cost_unit_for(const CostScale& scale, double max_distance) {
  const double top = scale(std::max(max_distance, 1e-300));
  if (!(top > 0.0) || !std::isfinite(top)) return 1.0;
  return kMaxIntegerCost / top;
}

std::size_t TransportPlan::used_cells() const {
  return static_cast<std::size_t>(std::count_if(assignment.begin(), assignment.end(), [](int a) { return a >= 0; }));
}

DiscreteTransport solve_discrete_transport(const DiscreteMeasure& source, const DiscreteMeasure& sink,
                                           const CostScale& scale, double unit_mass, bool semicoupling,
                                           std::vector<double> cut_radius, int max_radius_doublings) {
  const auto n = static_cast<int>(source.points.cols());
  const auto k = static_cast<int>(sink.points.cols());
  if (static_cast<int>(source.units.size()) != n || static_cast<int>(sink.units.size()) != k) {
    throw ArgumentError("one unit count per point required");
  }
  if (n > 0 && k > 0 && source.points.rows() != sink.points.rows()) throw ArgumentError("dimension mismatch");
  if (!cut_radius.empty() && static_cast<int>(cut_radius.size()) != k) throw ArgumentError("one cut radius per sink");
  const __int128 supply = std::accumulate(source.units.begin(), source.units.end(), __int128{0});
  const __int128 demand = std::accumulate(sink.units.begin(), sink.units.end(), __int128{0});
  if (semicoupling && supply < demand) throw InfeasibleError("source has less mass than the targets need");
  if (!semicoupling && supply != demand) throw ArgumentError("balanced transport needs equal total mass");

  const double diameter = bounding_diameter(source.points, sink.points);
  DiscreteTransport out;
  out.unit_mass = unit_mass;
  out.cost_unit = cost_unit_for(scale, diameter);

  for (int attempt = 0;; ++attempt) {
    const bool dense = cut_radius.empty() ||
                       std::all_of(cut_radius.begin(), cut_radius.end(), [&](double r) { return r >= diameter; });
    PairModel model{source.points, sink.points, scale, out.cost_unit, {}};
    if (!dense) {
      model.radius2.resize(cut_radius.size());
      for (std::size_t j = 0; j < cut_radius.size(); ++j) model.radius2[j] = cut_radius[j] * cut_radius[j];
    }
    std::vector<std::vector<flow::SinkArc>> arcs(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < n; ++i) {
        if (source.units[static_cast<std::size_t>(i)] == 0 || !model.has_arc(i, j)) continue;
        arcs[static_cast<std::size_t>(j)].push_back({model.cost(i, j), i});
      }
    }
    flow::SuccessiveShortestPaths<PairModel> solver(model, source.units, sink.units, std::move(arcs));
    auto grow = [&]() {
      if (dense || attempt >= max_radius_doublings) return false;
      for (auto& r : cut_radius) r *= 2.0;
      return true;
    };
    try {
      solver.run();
    } catch (const InfeasibleError&) {
      if (grow()) continue;
      throw;
    }
    const flow::Certificate cert = solver.certify(semicoupling);
    if (!cert.verified()) {
      if (grow()) continue;
      throw std::logic_error("dual certificate failed with every arc available");
    }
    out.iterations = solver.iterations();
    out.certificate.target_potential = cert.sink_potential;
    out.certificate.max_violation = cert.max_violation;
    out.certificate.pairs_checked = cert.pairs_checked;
    out.certificate.radius_doublings = attempt;
    out.certificate.verified = true;
    out.flows = solver.flows();
    out.unused = solver.residual_supply();
    long double cost = 0;
    __int128 icost = 0;
    for (int i = 0; i < n; ++i) {
      for (const auto& f : out.flows[static_cast<std::size_t>(i)]) {
        const double d2 = model.dist2(i, f.sink);
        cost += static_cast<long double>(f.units) * scale.from_squared(d2);
        icost += static_cast<__int128>(f.units) * model.cost(i, f.sink);
      }
    }
    out.total_cost = static_cast<double>(cost * unit_mass);
    out.integer_cost = saturating(icost);
    return out;
  }
}

SolveReport solve_semicoupling(const GridMeasure& grid, const PointPattern& pattern, const CostScale& scale,
                               const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (pattern.dim() != grid.dim()) throw ArgumentError("grid and pattern dimensions differ");
  const int d = grid.dim();
  const double cell_mass = grid.cell_mass();
  std::vector<std::int64_t> demand(static_cast<std::size_t>(pattern.size()));
  for (int j = 0; j < pattern.size(); ++j) {
    const double cells = pattern.mass(j) / cell_mass;
    const double rounded = std::round(cells);
    if (std::abs(cells - rounded) > 1e-6 || rounded < 1) {
      throw ArgumentError("target mass is not a whole number of grid cells");
    }
    demand[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(rounded);
  }

  std::vector<std::size_t> cells;
  cells.reserve(grid.num_active());
  for (std::size_t c = 0; c < grid.num_cells(); ++c) {
    if (grid.active(c)) cells.push_back(c);
  }
  const auto needed = std::accumulate(demand.begin(), demand.end(), std::int64_t{0});
  if (needed > static_cast<std::int64_t>(cells.size())) throw InfeasibleError("grid has less mass than the pattern");

  DiscreteMeasure source{PointMatrix(d, static_cast<Eigen::Index>(cells.size())),
                         std::vector<std::int64_t>(cells.size(), 1)};
  for (std::size_t s = 0; s < cells.size(); ++s) {
    for (int a = 0; a < d; ++a) source.points(a, static_cast<Eigen::Index>(s)) = grid.center_coord(cells[s], a);
  }
  DiscreteMeasure sink{pattern.points(), demand};

  const double diag = grid.cell_width() * std::sqrt(static_cast<double>(d));
  std::vector<double> radius(static_cast<std::size_t>(pattern.size()));
  for (int j = 0; j < pattern.size(); ++j) {
    radius[static_cast<std::size_t>(j)] =
        options.cut_radius > 0 ? options.cut_radius : 2.0 * ball_radius(pattern.mass(j), d) + 2.0 * diag;
  }
  const DiscreteTransport t =
      solve_discrete_transport(source, sink, scale, cell_mass, true, radius, options.max_radius_doublings);

  TransportPlan plan{grid, pattern, scale, std::vector<int>(grid.num_cells(), kInactive),
                     std::vector<std::int64_t>(static_cast<std::size_t>(pattern.size()), 0), demand};
  for (std::size_t s = 0; s < cells.size(); ++s) {
    const auto& fl = t.flows[s];
    int target = kCemetery;
    if (!fl.empty()) {
      target = fl.front().sink;
      plan.target_received[static_cast<std::size_t>(target)] += fl.front().units;
    }
    plan.assignment[cells[s]] = target;
  }
  plan.total_cost = t.total_cost;
  plan.cost_unit = t.cost_unit;
  plan.integer_cost = t.integer_cost;

  SolveReport report{std::move(plan), t.iterations, t.certificate, 0.0};
  report.runtime_ms = elapsed_ms(start);
  return report;
}

bool touches_window_boundary(const TransportPlan& plan) {
  for (std::size_t c = 0; c < plan.assignment.size(); ++c) {
    if (plan.assignment[c] >= 0 && plan.grid.on_boundary(c)) return true;
  }
  return false;
}

BalancedReport solve_balanced(const GridMeasure& source, const PointPattern& pattern, const CostScale& scale) {
  const auto start = std::chrono::steady_clock::now();
  if (pattern.dim() != source.dim()) throw ArgumentError("grid and pattern dimensions differ");
  const double mass = pattern.total_mass();
  if (std::abs(source.total_mass() - mass) > 1e-9 * std::max(1.0, mass)) {
    throw ArgumentError("balanced transport needs equal source and target mass");
  }
  const int d = source.dim();
  std::vector<std::size_t> cells;
  for (std::size_t c = 0; c < source.num_cells(); ++c) {
    if (source.active(c)) cells.push_back(c);
  }
  const auto total_mult = static_cast<std::int64_t>(pattern.total_multiplicity());
  const auto n_cells = static_cast<std::int64_t>(cells.size());
  BalancedPlan plan{source, pattern, scale, std::vector<std::vector<flow::FlowEntry>>(source.num_cells()),
                    total_mult, {}, 0.0, 0.0, 1.0, 0};
  if (pattern.empty()) {
    BalancedReport report{std::move(plan), 0, {}, elapsed_ms(start)};
    report.certificate.verified = true;
    return report;
  }
  DiscreteMeasure src{PointMatrix(d, static_cast<Eigen::Index>(cells.size())),
                      std::vector<std::int64_t>(cells.size(), total_mult)};
  for (std::size_t s = 0; s < cells.size(); ++s) {
    for (int a = 0; a < d; ++a) src.points(a, static_cast<Eigen::Index>(s)) = source.center_coord(cells[s], a);
  }
  DiscreteMeasure sink{pattern.points(), {}};
  for (int j = 0; j < pattern.size(); ++j) sink.units.push_back(pattern.multiplicity(j) * n_cells);
  plan.target_units = sink.units;
  plan.unit_mass = mass / static_cast<double>(n_cells * total_mult);

  const DiscreteTransport t = solve_discrete_transport(src, sink, scale, plan.unit_mass, false);
  for (std::size_t s = 0; s < cells.size(); ++s) plan.flows[cells[s]] = t.flows[s];
  plan.total_cost = t.total_cost;
  plan.cost_unit = t.cost_unit;
  plan.integer_cost = t.integer_cost;
  BalancedReport report{std::move(plan), t.iterations, t.certificate, 0.0};
  report.runtime_ms = elapsed_ms(start);
  return report;
}

RestrictedProblem restrict_plan(const TransportPlan& plan, const Box& region) {
  std::vector<int> target_map;
  PointPattern sub = plan.pattern.restricted(region, &target_map);
  std::vector<int> inside(static_cast<std::size_t>(plan.pattern.size()), 0);
  for (int j : target_map) inside[static_cast<std::size_t>(j)] = 1;

  GridMeasure lambda = plan.grid;
  std::vector<std::uint8_t> mask(plan.grid.num_cells(), 0);
  long double cost = 0;
  for (std::size_t c = 0; c < plan.grid.num_cells(); ++c) {
    const int a = plan.assignment[c];
    if (a == kInactive) continue;
    if (a == kCemetery || inside[static_cast<std::size_t>(a)]) mask[c] = 1;
    if (a >= 0 && inside[static_cast<std::size_t>(a)]) {
      cost += plan.scale.from_squared(squared_distance(plan.grid.center(c), plan.pattern.point(a)));
    }
  }
  lambda.set_mask(std::move(mask));
  return RestrictedProblem{std::move(lambda), std::move(sub), static_cast<double>(cost * plan.grid.cell_mass()),
                           std::move(target_map)};
}

}  // namespace semicouple
