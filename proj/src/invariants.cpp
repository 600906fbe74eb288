#include "semicouple/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "semicouple/errors.hpp"
#include "semicouple/pointprocess.hpp"

namespace semicouple {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using Matrix = Eigen::MatrixXd;

// Source points with the target each one serves (-1 for free points) and a
// cost oracle; shared by grid plans and Laguerre samples.
struct Support {
  PointMatrix points;
  std::vector<int> target;
  const PointPattern* pattern = nullptr;
  const CostScale* scale = nullptr;

  double cost(Eigen::Index i, int j) const {
    return scale->from_squared(squared_distance(points.col(i), pattern->point(j)));
  }
};

Support support_of(const TransportPlan& plan, bool include_free) {
  Support s;
  s.pattern = &plan.pattern;
  s.scale = &plan.scale;
  std::vector<std::size_t> cells;
  for (std::size_t c = 0; c < plan.assignment.size(); ++c) {
    const int a = plan.assignment[c];
    if (a >= 0 || (include_free && a == kCemetery)) cells.push_back(c);
  }
  s.points.resize(plan.grid.dim(), static_cast<Eigen::Index>(cells.size()));
  s.target.reserve(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    for (int a = 0; a < plan.grid.dim(); ++a) s.points(a, static_cast<Eigen::Index>(k)) = plan.grid.center_coord(cells[k], a);
    s.target.push_back(plan.assignment[cells[k]]);
  }
  return s;
}

// gain[j][j'] = max over points x served by j of c(x, j) - c(x, j')
Matrix reassignment_gain(const Support& s) {
  const int k = s.pattern->size();
  Matrix gain = Matrix::Constant(k, k, kNegInf);
  std::vector<double> row(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < s.points.cols(); ++i) {
    const int j = s.target[static_cast<std::size_t>(i)];
    if (j < 0) continue;
    for (int t = 0; t < k; ++t) row[static_cast<std::size_t>(t)] = s.cost(i, t);
    for (int t = 0; t < k; ++t) {
      if (t == j) continue;
      gain(j, t) = std::max(gain(j, t), row[static_cast<std::size_t>(j)] - row[static_cast<std::size_t>(t)]);
    }
  }
  return gain;
}

Matrix max_plus(const Matrix& a, const Matrix& b) {
  const Eigen::Index k = a.rows();
  Matrix out = Matrix::Constant(k, k, kNegInf);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index m = 0; m < k; ++m) {
      if (a(i, m) == kNegInf) continue;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (b(m, j) == kNegInf) continue;
        out(i, j) = std::max(out(i, j), a(i, m) + b(m, j));
      }
    }
  }
  return out;
}

// Largest total gain of a closed walk with 2..max_len target steps.
double exact_cycle_gain(const Support& s, int max_len) {
  if (s.pattern->size() < 2) return kNegInf;
  const Matrix gain = reassignment_gain(s);
  Matrix walk = gain;
  double best = kNegInf;
  for (int len = 2; len <= max_len; ++len) {
    walk = max_plus(walk, gain);
    best = std::max(best, walk.diagonal().maxCoeff());
  }
  return best;
}

std::vector<Eigen::Index> served_indices(const Support& s) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < s.points.cols(); ++i) {
    if (s.target[static_cast<std::size_t>(i)] >= 0) out.push_back(i);
  }
  return out;
}

CheckReport cyclical(const Support& s, int cycles, int max_len, std::uint64_t seed, std::string name) {
  if (max_len < 2) throw ArgumentError("cycles need length >= 2");
  CheckReport r;
  r.check_name = std::move(name);
  const auto served = served_indices(s);
  double worst = kNegInf;
  if (served.size() >= 2 && s.pattern->size() >= 2) {
    CounterRng rng(seed, 0, static_cast<std::uint64_t>(Stream::Checker));
    std::vector<Eigen::Index> pick;
    for (int c = 0; c < cycles; ++c) {
      const int len = 2 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_len - 1));
      pick.clear();
      for (int i = 0; i < len; ++i) pick.push_back(served[rng.next() % served.size()]);
      double diff = 0.0;
      for (int i = 0; i < len; ++i) {
        const Eigen::Index x = pick[static_cast<std::size_t>(i)];
        const int own = s.target[static_cast<std::size_t>(x)];
        const int next = s.target[static_cast<std::size_t>(pick[static_cast<std::size_t>((i + 1) % len)])];
        diff += s.cost(x, own) - s.cost(x, next);
      }
      worst = std::max(worst, diff);
      ++r.samples_tested;
    }
  }
  const double exact = exact_cycle_gain(s, max_len);
  worst = std::max(worst, exact);
  r.worst_violation = worst == kNegInf ? 0.0 : worst;
  r.passed = r.worst_violation <= kMonotonicityTolerance;
  std::ostringstream os;
  os.precision(6);
  os << r.samples_tested << " sampled cycles";
  if (exact != kNegInf) os << ", exact target-cycle gain " << exact;
  if (s.pattern->size() < 2) os << ", fewer than two targets";
  r.details = os.str();
  return r;
}

}  // namespace

CheckReport check_cyclical_monotonicity(const TransportPlan& plan, int cycles, int max_len, std::uint64_t seed) {
  return cyclical(support_of(plan, false), cycles, max_len, seed, "cyclical_monotonicity");
}

CheckReport check_cyclical_monotonicity(const LaguerreDiagram& diagram, int cycles, int max_len, std::uint64_t seed) {
  // sample the map on points drawn uniformly from the union of cells
  const int k = diagram.pattern.size();
  Eigen::Vector2d lo = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector2d hi = -lo;
  for (int j = 0; j < k; ++j) {
    const double r = std::sqrt(std::max(0.0, diagram.weights[j]));
    const Eigen::Vector2d c = diagram.pattern.point(j);
    lo = lo.cwiseMin(c - Eigen::Vector2d::Constant(r));
    hi = hi.cwiseMax(c + Eigen::Vector2d::Constant(r));
  }
  constexpr int kSamples = 8192;
  CounterRng rng(seed, 1, static_cast<std::uint64_t>(Stream::Checker));
  Support s;
  s.pattern = &diagram.pattern;
  static const CostScale quadratic = CostScale::power(2.0);
  s.scale = &quadratic;
  s.points.resize(2, kSamples);
  int filled = 0;
  for (int attempt = 0; filled < kSamples && attempt < 100 * kSamples; ++attempt) {
    const Eigen::Vector2d x(lo.x() + (hi.x() - lo.x()) * rng.uniform(), lo.y() + (hi.y() - lo.y()) * rng.uniform());
    const int t = diagram.target_at(x);
    if (t < 0) continue;
    s.points.col(filled++) = x;
    s.target.push_back(t);
  }
  s.points.conservativeResize(2, filled);
  return cyclical(s, cycles, max_len, seed, "cyclical_monotonicity_laguerre");
}

CheckReport check_sequential_monotonicity(const TransportPlan& plan, int chains, int max_len, std::uint64_t seed) {
  if (max_len < 1) throw ArgumentError("chains need length >= 1");
  CheckReport r;
  r.check_name = "sequential_monotonicity";
  const Support s = support_of(plan, true);
  std::vector<Eigen::Index> served, free;
  for (Eigen::Index i = 0; i < s.points.cols(); ++i) {
    (s.target[static_cast<std::size_t>(i)] >= 0 ? served : free).push_back(i);
  }
  if (free.empty()) {
    r.skipped = true;
    r.passed = true;
    r.details = "no cemetery cells; check skipped";
    return r;
  }
  if (served.empty()) {
    r.passed = true;
    r.details = "no used cells";
    return r;
  }
  double worst = kNegInf;
  CounterRng rng(seed, 2, static_cast<std::uint64_t>(Stream::Checker));
  std::vector<Eigen::Index> chain;
  for (int c = 0; c < chains; ++c) {
    const int len = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_len));
    chain.clear();
    for (int i = 0; i < len; ++i) chain.push_back(served[rng.next() % served.size()]);
    chain.push_back(free[rng.next() % free.size()]);
    double diff = 0.0;
    for (int i = 0; i < len; ++i) {
      const int own = s.target[static_cast<std::size_t>(chain[static_cast<std::size_t>(i)])];
      diff += s.cost(chain[static_cast<std::size_t>(i)], own) - s.cost(chain[static_cast<std::size_t>(i) + 1], own);
    }
    worst = std::max(worst, diff);
    ++r.samples_tested;
  }

  // exact: farthest used cell of the first target, best reassignment steps,
  // nearest free cell of the last target
  const int k = plan.pattern.size();
  Eigen::VectorXd farthest = Eigen::VectorXd::Constant(k, kNegInf);
  Eigen::VectorXd nearest_free = Eigen::VectorXd::Constant(k, std::numeric_limits<double>::infinity());
  for (Eigen::Index i : served) {
    const int j = s.target[static_cast<std::size_t>(i)];
    farthest[j] = std::max(farthest[j], s.cost(i, j));
  }
  for (Eigen::Index i : free) {
    for (int j = 0; j < k; ++j) nearest_free[j] = std::min(nearest_free[j], s.cost(i, j));
  }
  // step from target a to target b: x served by b now goes to a
  const Matrix gain = reassignment_gain(s);
  Eigen::VectorXd best = farthest;
  double exact = (best - nearest_free).maxCoeff();
  for (int len = 2; len <= max_len; ++len) {
    Eigen::VectorXd next = Eigen::VectorXd::Constant(k, kNegInf);
    for (int a = 0; a < k; ++a) {
      if (best[a] == kNegInf) continue;
      for (int b = 0; b < k; ++b) {
        if (b == a || gain(b, a) == kNegInf) continue;
        next[b] = std::max(next[b], best[a] + gain(b, a));
      }
    }
    best = next;
    exact = std::max(exact, (best - nearest_free).maxCoeff());
  }
  worst = std::max(worst, exact);
  r.worst_violation = worst;
  r.passed = worst <= kMonotonicityTolerance;
  std::ostringstream os;
  os.precision(6);
  os << r.samples_tested << " sampled chains, exact chain gain " << exact;
  r.details = os.str();
  return r;
}

CheckReport check_efficiency(const TransportPlan& plan, const std::vector<Box>& sub_boxes) {
  CheckReport r;
  r.check_name = "efficiency";
  double min_ratio = 1.0;
  std::ostringstream os;
  os.precision(12);
  for (const auto& box : sub_boxes) {
    const RestrictedProblem sub = restrict_plan(plan, box);
    double ratio = 1.0;
    if (sub.sub_cost > 0.0) {
      const SolveReport again = solve_semicoupling(sub.lambda, sub.sub_pattern, plan.scale);
      ratio = again.plan.total_cost / sub.sub_cost;
    }
    min_ratio = std::min(min_ratio, ratio);
    os << "targets=" << sub.sub_pattern.size() << " ratio=" << ratio << "; ";
    ++r.samples_tested;
  }
  r.worst_violation = 1.0 - min_ratio;
  r.passed = min_ratio >= 1.0 - kEfficiencyTolerance;
  r.details = os.str();
  return r;
}

CheckReport check_volumes(const TransportPlan& plan) {
  CheckReport r;
  r.check_name = "volumes";
  std::int64_t worst = 0;
  std::vector<std::int64_t> counted(static_cast<std::size_t>(plan.pattern.size()), 0);
  for (int a : plan.assignment) {
    if (a >= 0) ++counted[static_cast<std::size_t>(a)];
  }
  for (int j = 0; j < plan.pattern.size(); ++j) {
    const std::int64_t demand = plan.target_demand[static_cast<std::size_t>(j)];
    for (std::int64_t got : {plan.target_received[static_cast<std::size_t>(j)], counted[static_cast<std::size_t>(j)]}) {
      worst = std::max(worst, got < demand ? demand - got : got - demand);
    }
    // demand itself must be the target's mass
    const double want = plan.pattern.mass(j);
    if (std::abs(static_cast<double>(plan.target_demand[static_cast<std::size_t>(j)]) * plan.grid.cell_mass() - want) >
        1e-9 * std::max(1.0, want)) {
      worst = std::max<std::int64_t>(worst, 1);
    }
    ++r.samples_tested;
  }
  r.worst_violation = static_cast<double>(worst) * plan.grid.cell_mass();
  r.passed = worst == 0;
  r.details = "grid cells off target: " + std::to_string(worst);
  return r;
}

CheckReport check_volumes(const LaguerreDiagram& diagram) {
  CheckReport r;
  r.check_name = "volumes_laguerre";
  double worst = 0.0;
  for (int j = 0; j < diagram.pattern.size(); ++j) {
    const double area = diagram.cells[static_cast<std::size_t>(j)].area();
    worst = std::max(worst, std::abs(area - diagram.pattern.mass(j)));
    ++r.samples_tested;
  }
  r.worst_violation = worst;
  r.passed = worst <= kDiagramVolumeTolerance;
  return r;
}

CheckReport check_indicator_marginal(const TransportPlan& plan) {
  CheckReport r;
  r.check_name = "indicator_marginal";
  std::vector<std::int64_t> tally(static_cast<std::size_t>(plan.pattern.size()), 0);
  std::int64_t bad = 0;
  for (std::size_t c = 0; c < plan.assignment.size(); ++c) {
    const int a = plan.assignment[c];
    const bool active = plan.grid.active(c);
    if (!active && a != kInactive) ++bad;
    if (active && (a == kInactive || a >= plan.pattern.size() || a < kCemetery)) ++bad;
    if (a >= 0 && a < plan.pattern.size()) ++tally[static_cast<std::size_t>(a)];
    ++r.samples_tested;
  }
  for (std::size_t j = 0; j < tally.size(); ++j) {
    if (tally[j] != plan.target_received[j]) ++bad;
  }
  r.worst_violation = static_cast<double>(bad);
  r.passed = bad == 0;
  return r;
}

CheckReport check_convexity(const LaguerreDiagram& diagram) {
  CheckReport r;
  r.check_name = "convexity";
  std::int64_t bad = 0;
  for (const auto& cell : diagram.cells) {
    if (!cell.is_convex()) ++bad;
    ++r.samples_tested;
  }
  r.worst_violation = static_cast<double>(bad);
  r.passed = bad == 0;
  return r;
}

CheckReport check_monotone_costs(const std::vector<CostEstimate>& estimates) {
  if (estimates.size() < 2) throw ArgumentError("monotone cost check needs at least two generations");
  CheckReport r;
  r.check_name = "monotone_costs";
  double worst = kNegInf;
  for (std::size_t i = 0; i + 1 < estimates.size(); ++i) {
    const auto& a = estimates[i];
    const auto& b = estimates[i + 1];
    worst = std::max(worst, a.mean - b.mean - 3.0 * (a.stderr_ + b.stderr_));
    ++r.samples_tested;
  }
  r.worst_violation = worst;
  r.passed = worst <= 0.0;
  return r;
}

}  // namespace semicouple
