#include "semicouple/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "semicouple/analytic_transports.hpp"
#include "semicouple/errors.hpp"
#include "semicouple/pointprocess.hpp"
#include "semicouple/semicoupling.hpp"

namespace semicouple {

namespace {

constexpr int kMinReplicas = 30;
constexpr double kMaxCells = 4.0e6;

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Replica r is handled by worker r % threads; exceptions are rethrown in
// replica order.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::min(resolve_threads(threads), std::max(1, count));
  if (threads == 1) {
    for (int r = 0; r < count; ++r) fn(r);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int r = t; r < count; r += threads) {
        try {
          fn(r);
        } catch (...) {
          errors[static_cast<std::size_t>(r)] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void require_dimension_and_generation(int n, int d) {
  if (d < 1 || d > 3) throw ArgumentError("experiments run in d = 1, 2 or 3");
  if (n < 0) throw ArgumentError("generation must be nonnegative");
  const int max_n = d == 1 ? 6 : d == 2 ? 3 : 1;
  if (n > max_n) throw ArgumentError("generation " + std::to_string(n) + " exceeds the grid limit for d = " + std::to_string(d));
}

void require_cells(double edge, int m, int d) {
  if (std::pow(edge * m, d) > kMaxCells) throw ArgumentError("grid resolution infeasible for this window");
}

Box standard_box(int n, int d) { return Box::cube(Vector::Zero(d), std::ldexp(1.0, n)); }

int resolution(const ExperimentOptions& options, int d) { return options.m > 0 ? options.m : default_grid_resolution(d); }

void require_margin(double margin, int m) {
  if (!(margin > 0.0)) throw ArgumentError("window margin must be positive");
  const double cells = margin * m;
  if (std::abs(cells - std::round(cells)) > 1e-9) throw ArgumentError("margin times m must be an integer");
}

EstimateRecord blank_record(std::string quantity, int n, int d, const CostScale& scale, double beta, int replicas,
                            std::uint64_t seed, int m) {
  EstimateRecord rec;
  rec.quantity = std::move(quantity);
  rec.n = n;
  rec.d = d;
  rec.scale_id = scale.id();
  rec.beta = beta;
  rec.replicas = replicas;
  rec.seed = seed;
  rec.m = m;
  return rec;
}

double pooled(double a, double b) { return std::sqrt(a * a + b * b); }

InequalityReport inequality(std::string name, std::string form, double lhs, double rhs, double slack, double se) {
  InequalityReport r;
  r.name = std::move(name);
  r.form = std::move(form);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = slack;
  r.pooled_se = se;
  r.holds = lhs <= rhs + 3.0 * se;
  return r;
}

// p-th root of a Monte Carlo mean with its delta-method standard error.
std::pair<double, double> root_estimate(double mean, double se, double p) {
  const double root = std::pow(std::max(mean, 0.0), 1.0 / p);
  if (root <= 0.0) return {0.0, se};
  return {root, se * root / (p * mean)};
}

struct SolvedWindow {
  double cost = 0.0;
  bool touches = false;
};

SolvedWindow solve_in(const GridMeasure& grid, const PointPattern& pattern, const CostScale& scale) {
  if (pattern.empty()) return {};
  // a window lighter than the pattern cannot hold it; report it like a touching plan so callers widen it
  if (static_cast<double>(grid.num_active()) * grid.cell_mass() < pattern.total_mass()) return {0.0, true};
  const SolveReport rep = solve_semicoupling(grid, pattern, scale);
  return {rep.plan.total_cost, touches_window_boundary(rep.plan)};
}

}  // namespace

int default_grid_resolution(int d) {
  switch (d) {
    case 1: return 256;
    case 2: return 32;
    case 3: return 8;
    default: throw ArgumentError("no default grid resolution for d = " + std::to_string(d));
  }
}

std::vector<double> run_replicas(int replicas, int threads, const std::function<double(int)>& fn) {
  std::vector<double> out(static_cast<std::size_t>(std::max(replicas, 0)));
  parallel_for(replicas, threads, [&](int r) { out[static_cast<std::size_t>(r)] = fn(r); });
  return out;
}

void summarize(EstimateRecord& record) {
  const auto count = static_cast<double>(record.values.size());
  if (record.values.empty()) {
    record.mean = record.stderr_ = 0.0;
    return;
  }
  double sum = 0.0;
  for (double v : record.values) sum += v;
  record.mean = sum / count;
  double ss = 0.0;
  for (double v : record.values) ss += (v - record.mean) * (v - record.mean);
  record.stderr_ = count > 1 ? std::sqrt(ss / (count - 1.0) / count) : 0.0;
}

double cn_replica(int n, int d, const CostScale& scale, double beta, std::uint64_t seed, std::uint64_t replica,
                  int m, double margin, int max_doublings, double* margin_used) {
  const Box box = standard_box(n, d);
  const PointPattern pattern = sample_ppp(PppSampler{beta, seed, replica}, box);
  double w = margin;
  for (int attempt = 0;; ++attempt, w *= 2.0) {
    if (margin_used) *margin_used = w;
    if (pattern.empty()) return 0.0;
    const GridMeasure grid(box.enlarged(w), m);
    const SolvedWindow s = solve_in(grid, pattern, scale);
    if (!s.touches) return s.cost / box.volume();
    if (attempt >= max_doublings) throw InfeasibleError("used region still touches the window after margin doublings");
  }
}

double chat_replica(int n, int d, const CostScale& scale, std::uint64_t seed, std::uint64_t replica, int m) {
  const Box box = standard_box(n, d);
  const PointPattern pattern = sample_ppp(PppSampler{1.0, seed, replica}, box);
  if (pattern.empty()) return 0.0;
  GridMeasure grid(box, m);
  grid.set_cell_mass(pattern.total_mass() / static_cast<double>(grid.num_cells()));
  const BalancedReport rep = solve_balanced(grid, pattern, scale);
  return rep.plan.total_cost / box.volume();
}

EstimateRecord estimate_cn(int n, int d, const CostScale& scale, double beta, int replicas, std::uint64_t seed,
                           const ExperimentOptions& options) {
  require_dimension_and_generation(n, d);
  if (replicas < kMinReplicas) throw ArgumentError("estimates need at least 30 replicas");
  if (!(beta >= 0.0)) throw ArgumentError("intensity must be nonnegative");
  const int m = resolution(options, d);
  require_margin(options.margin, m);
  require_cells(std::ldexp(1.0, n) + 2.0 * options.margin, m, d);
  EstimateRecord rec = blank_record("c_n", n, d, scale, beta, replicas, seed, m);
  std::vector<double> margins(static_cast<std::size_t>(replicas), options.margin);
  rec.values = run_replicas(replicas, options.threads, [&](int r) {
    return cn_replica(n, d, scale, beta, seed, static_cast<std::uint64_t>(r), m, options.margin,
                      options.max_margin_doublings, &margins[static_cast<std::size_t>(r)]);
  });
  rec.margin = *std::max_element(margins.begin(), margins.end());
  summarize(rec);
  return rec;
}

EstimateRecord estimate_chat_n(int n, int d, const CostScale& scale, int replicas, std::uint64_t seed,
                               const ExperimentOptions& options) {
  require_dimension_and_generation(n, d);
  if (replicas < kMinReplicas) throw ArgumentError("estimates need at least 30 replicas");
  const int m = resolution(options, d);
  require_cells(std::ldexp(1.0, n), m, d);
  EstimateRecord rec = blank_record("c_hat_n", n, d, scale, 1.0, replicas, seed, m);
  rec.values = run_replicas(replicas, options.threads, [&](int r) {
    return chat_replica(n, d, scale, seed, static_cast<std::uint64_t>(r), m);
  });
  summarize(rec);
  return rec;
}

ComparisonReport compare_cn_chat(int n, int d, const CostScale& scale, int replicas, std::uint64_t seed,
                                 const ExperimentOptions& options) {
  ComparisonReport out;
  out.cn = estimate_cn(n, d, scale, 1.0, replicas, seed, options);
  out.chat = estimate_chat_n(n, d, scale, replicas, seed, options);
  if (scale.kind() == CostScale::Kind::Power && scale.unit_multipliers() && scale.exponent() >= 1.0) {
    const double p = scale.exponent();
    const auto [lc, lse] = root_estimate(out.cn.mean, out.cn.stderr_, p);
    const auto [rc, rse] = root_estimate(out.chat.mean, out.chat.stderr_, p);
    const double slack = comparison_slack_lp(n, d, p);
    out.inequality = inequality("c_n vs c_hat_n", "p-th root", lc, rc + slack, slack, pooled(lse, rse));
  } else {
    const double slack = comparison_slack(n, d, scale);
    out.inequality = inequality("c_n vs c_hat_n", "concave", out.cn.mean, out.chat.mean + slack, slack,
                                pooled(out.cn.stderr_, out.chat.stderr_));
  }
  return out;
}

RecursionReport recursion_check(int n, int d, const CostScale& scale, int replicas, std::uint64_t seed,
                                const ExperimentOptions& options) {
  RecursionReport out;
  out.chat_n = estimate_chat_n(n, d, scale, replicas, seed, options);
  out.chat_next = estimate_chat_n(n + 1, d, scale, replicas, seed, options);
  out.increment = modified_cost_chain_bound(n, d, scale);
  out.inequality = inequality("c_hat recursion", "concave", out.chat_next.mean, out.chat_n.mean + out.increment,
                              out.increment, pooled(out.chat_n.stderr_, out.chat_next.stderr_));
  return out;
}

StabilizationRecord stabilization_study(const IntVector& z, std::uint64_t gamma_seed, int max_n, int d,
                                        const CostScale& scale, double beta, const Box& probe_region, int replicas,
                                        const ExperimentOptions& options) {
  require_dimension_and_generation(max_n, d);
  if (max_n < 1) throw ArgumentError("stabilization needs at least two generations");
  if (z.size() != d || probe_region.dim() != d) throw ArgumentError("basepoint and probe region must have dimension d");
  if (replicas < 1) throw ArgumentError("stabilization needs at least one replica");
  const int m = options.m > 0 ? options.m : 16;
  require_margin(options.margin, m);
  require_cells(std::ldexp(1.0, max_n) + 2.0 * options.margin, m, d);

  StabilizationRecord rec;
  rec.z = z;
  rec.replicas = replicas;
  rec.seed = gamma_seed;
  rec.m = m;
  for (int g = 0; g <= max_n; ++g) rec.generations.push_back(g);
  rec.per_replica.assign(static_cast<std::size_t>(replicas), {});

  parallel_for(replicas, options.threads, [&](int r) {
    const auto rr = static_cast<std::uint64_t>(r);
    const auto gamma = sample_gamma_word(gamma_seed, max_n, d, rr);
    const DyadicBox largest = doubling_box(z, gamma, max_n);
    const PointPattern pattern = sample_ppp(PppSampler{beta, gamma_seed, rr}, largest);
    double w = options.margin;
    for (int attempt = 0;; ++attempt, w *= 2.0) {
      const GridMeasure grid(largest.box().enlarged(w), m);
      if (static_cast<double>(grid.num_active()) * grid.cell_mass() < pattern.total_mass() &&
          attempt < options.max_margin_doublings) {
        continue;
      }
      std::vector<std::size_t> probes;
      for (std::size_t c = 0; c < grid.num_cells(); ++c) {
        if (probe_region.contains(grid.center(c))) probes.push_back(c);
      }
      std::vector<std::vector<int>> targets;
      bool touches = false;
      for (int g = 0; g <= max_n; ++g) {
        std::vector<int> index;
        const PointPattern sub = pattern.restricted(doubling_box(z, gamma, g).box(), &index);
        std::vector<int> t(probes.size(), kCemetery);
        if (!sub.empty()) {
          const SolveReport rep = solve_semicoupling(grid, sub, scale);
          touches = touches || touches_window_boundary(rep.plan);
          for (std::size_t k = 0; k < probes.size(); ++k) {
            const int a = rep.plan.assignment[probes[k]];
            t[k] = a >= 0 ? index[static_cast<std::size_t>(a)] : a;
          }
        }
        targets.push_back(std::move(t));
      }
      if (touches && attempt < options.max_margin_doublings) continue;
      if (touches) throw InfeasibleError("used region still touches the window after margin doublings");
      std::vector<double> fr;
      for (int g = 0; g < max_n; ++g) {
        std::size_t changed = 0;
        for (std::size_t k = 0; k < probes.size(); ++k) {
          if (targets[static_cast<std::size_t>(g)][k] != targets[static_cast<std::size_t>(g) + 1][k]) ++changed;
        }
        fr.push_back(probes.empty() ? 0.0 : static_cast<double>(changed) / static_cast<double>(probes.size()));
      }
      rec.per_replica[static_cast<std::size_t>(r)] = std::move(fr);
      return;
    }
  });

  for (int g = 0; g < max_n; ++g) {
    EstimateRecord tmp;
    for (const auto& fr : rec.per_replica) tmp.values.push_back(fr[static_cast<std::size_t>(g)]);
    summarize(tmp);
    rec.changed_fraction.push_back(tmp.mean);
    rec.changed_stderr.push_back(tmp.stderr_);
  }
  return rec;
}

BoundsReport bounds_suite(int d, double p) {
  if (d < 1) throw ArgumentError("bounds need d >= 1");
  if (!(p > 0.0)) throw ArgumentError("bounds need p > 0");
  BoundsReport rep;
  rep.p = p;
  const double stirling = std::pow(d / (2.0 * M_PI * M_E), 0.5 * p);
  if (p <= 1.0 && d > 2.0 * p) {
    BoundsEntry e;
    e.d = d;
    e.branch = "p<=1";
    e.lower = d / (d + p) * stirling;
    e.upper = std::pow(d / 6.0, 0.5 * p) + 1.0 / ((p + 1.0) * (std::pow(2.0, 0.5 * d - p) - 1.0));
    rep.entries.push_back(e);
  }
  if (p >= 1.0 && d >= 3) {
    BoundsEntry e;
    e.d = d;
    e.branch = "p>=1";
    e.lower = std::pow(d / (d + p), 1.0 / p) * std::sqrt(d / (2.0 * M_PI * M_E));
    const double denom = std::min(std::sqrt(6.0), std::pow((1.0 + p) * (1.0 + 0.5 * p), 1.0 / p));
    e.upper = std::sqrt(static_cast<double>(d)) / denom + 28.0 * std::pow(kappa1(p), 1.0 / p);
    rep.entries.push_back(e);
  }
  for (auto& e : rep.entries) {
    e.ratio = e.upper / e.lower;
    e.holds = e.lower <= e.upper;
  }
  if (rep.entries.empty()) {
    rep.skipped = true;
    rep.note = "d = " + std::to_string(d) + " outside both bracket ranges (p <= 1 needs d > 2p, p >= 1 needs d >= 3)";
  }
  const double denom = std::min(std::sqrt(6.0), std::pow((1.0 + p) * (1.0 + 0.5 * p), 1.0 / p));
  rep.asymptotic_ratio = std::sqrt(2.0 * M_PI * M_E) / denom;
  rep.asymptotic_limit = p <= 2.0 ? 2.0 : 5.0;
  rep.asymptotic_ok = rep.asymptotic_ratio < rep.asymptotic_limit;
  rep.passed = rep.asymptotic_ok && std::all_of(rep.entries.begin(), rep.entries.end(), [](const BoundsEntry& e) { return e.holds; });
  return rep;
}

BoundsReport bounds_sweep(int d_from, int d_to, double p) {
  if (d_from > d_to) throw ArgumentError("empty dimension sweep");
  BoundsReport all = bounds_suite(d_from, p);
  all.entries.clear();
  all.note.clear();
  std::vector<int> skipped;
  for (int d = d_from; d <= d_to; ++d) {
    const BoundsReport one = bounds_suite(d, p);
    all.entries.insert(all.entries.end(), one.entries.begin(), one.entries.end());
    if (one.skipped) skipped.push_back(d);
  }
  if (!skipped.empty()) {
    all.note = "skipped d =";
    for (int d : skipped) all.note += " " + std::to_string(d);
  }
  all.skipped = all.entries.empty();
  all.passed = all.asymptotic_ok && std::all_of(all.entries.begin(), all.entries.end(), [](const BoundsEntry& e) { return e.holds; });
  return all;
}

SuperadditivityReport superadditivity_harness(int d, const CostScale& scale, int replicas, std::uint64_t seed,
                                              const ExperimentOptions& options) {
  require_dimension_and_generation(1, d);
  if (replicas < 1) throw ArgumentError("superadditivity needs at least one replica");
  const int m = resolution(options, d);
  require_margin(options.margin, m);
  require_cells(2.0 + 2.0 * options.margin, m, d);
  const Box unionbox = standard_box(1, d);
  const auto children = subdivide(unionbox);

  std::vector<double> gaps(static_cast<std::size_t>(replicas));
  std::vector<double> slacks(static_cast<std::size_t>(replicas));
  parallel_for(replicas, options.threads, [&](int r) {
    const PointPattern pattern = sample_ppp(PppSampler{1.0, seed, static_cast<std::uint64_t>(r)}, unionbox);
    double w = options.margin;
    for (int attempt = 0;; ++attempt, w *= 2.0) {
      const GridMeasure grid(unionbox.enlarged(w), m);
      const SolvedWindow whole = solve_in(grid, pattern, scale);
      bool touches = whole.touches;
      double parts = 0.0;
      for (const auto& child : children) {
        const SolvedWindow s = solve_in(grid, pattern.restricted(child), scale);
        touches = touches || s.touches;
        parts += s.cost;
      }
      if (touches && attempt < options.max_margin_doublings) continue;
      if (touches) throw InfeasibleError("used region still touches the window after margin doublings");
      gaps[static_cast<std::size_t>(r)] = parts - whole.cost;
      slacks[static_cast<std::size_t>(r)] = 2.0 * grid.cell_mass() * scale(grid.window().diameter());
      return;
    }
  });

  SuperadditivityReport rep;
  rep.replicas = replicas;
  rep.worst_gap = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < replicas; ++r) {
    const double gap = gaps[static_cast<std::size_t>(r)];
    const double slack = slacks[static_cast<std::size_t>(r)];
    rep.slack = std::max(rep.slack, slack);
    rep.worst_gap = std::max(rep.worst_gap, gap);
    if (gap <= 0.0) ++rep.exact;
    if (gap <= slack) ++rep.within_slack;
  }
  rep.fraction = static_cast<double>(rep.exact) / replicas;
  rep.passed = rep.fraction >= 0.95 && rep.within_slack == replicas;
  return rep;
}

RescalingReport rescaling_consistency(int n, int d, const CostScale& scale, double beta, int replicas,
                                      std::uint64_t seed, const ExperimentOptions& options) {
  require_dimension_and_generation(n, d);
  if (replicas < kMinReplicas) throw ArgumentError("estimates need at least 30 replicas");
  if (!(beta > 0.0 && beta < 1.0)) throw ArgumentError("rescaling needs 0 < beta < 1");
  const double inv = 1.0 / beta;
  const int denom = static_cast<int>(std::lround(inv));
  if (std::abs(inv - denom) > 1e-12) throw ArgumentError("rescaling needs 1/beta to be an integer");
  const double shrink = std::pow(beta, 1.0 / d);
  const int m = resolution(options, d);
  const double m_small = m / shrink;
  if (std::abs(m_small - std::round(m_small)) > 1e-9) throw ArgumentError("m / beta^{1/d} must be an integer");
  require_margin(options.margin, m);
  require_cells(std::ldexp(1.0, n) + 2.0 * options.margin, m, d);

  const CostScale scaled = rescaled(scale, beta, d);
  const Box box = standard_box(n, d);
  RescalingReport rep;
  rep.direct = blank_record("c_n", n, d, scaled, beta, replicas, seed, m);
  rep.contracted = blank_record("c_n", n, d, scale, 1.0, replicas, seed, static_cast<int>(std::lround(m_small)));
  rep.direct.values.resize(static_cast<std::size_t>(replicas));
  rep.contracted.values.resize(static_cast<std::size_t>(replicas));
  std::vector<double> margins(static_cast<std::size_t>(replicas));
  parallel_for(replicas, options.threads, [&](int r) {
    const auto rr = static_cast<std::uint64_t>(r);
    double w = 0.0;
    rep.direct.values[static_cast<std::size_t>(r)] =
        cn_replica(n, d, scaled, beta, seed, rr, m, options.margin, options.max_margin_doublings, &w);
    margins[static_cast<std::size_t>(r)] = w;
    const PointPattern pattern = sample_ppp(PppSampler{beta, seed, rr}, box);
    if (pattern.empty()) return;
    const Box small_box{box.lower * shrink, box.extent * shrink};
    PointMatrix pts = pattern.points() * shrink;
    const PointPattern small(std::move(pts), std::vector<int>(static_cast<std::size_t>(pattern.size()), 1), small_box,
                             denom);
    const Box window = box.enlarged(w);
    const GridMeasure grid(Box{window.lower * shrink, window.extent * shrink}, static_cast<int>(std::lround(m_small)));
    rep.contracted.values[static_cast<std::size_t>(r)] = solve_in(grid, small, scale).cost / box.volume();
  });
  rep.direct.margin = rep.contracted.margin = *std::max_element(margins.begin(), margins.end());
  summarize(rep.direct);
  summarize(rep.contracted);
  const double se = pooled(rep.direct.stderr_, rep.contracted.stderr_);
  rep.agreement = inequality("rescaling", "two-sided", std::abs(rep.direct.mean - rep.contracted.mean), 0.0, 0.0, se);
  return rep;
}

}  // namespace semicouple
