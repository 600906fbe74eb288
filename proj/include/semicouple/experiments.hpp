#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "semicouple/geometry.hpp"
#include "semicouple/invariants.hpp"
#include "semicouple/scales.hpp"

namespace semicouple {

struct ExperimentOptions {
  // grid cells per unit length; 0 picks 256 / 32 / 8 for d = 1 / 2 / 3
  int m = 0;
  // Lebesgue window margin in length units, doubled while a used cell touches
  // the window boundary
  double margin = 2.0;
  int max_margin_doublings = 4;
  // worker threads for replicas; 0 means hardware concurrency
  int threads = 0;
};

int default_grid_resolution(int d);

struct EstimateRecord {
  std::string quantity;  // "c_n" or "c_hat_n"
  int n = 0;
  int d = 0;
  std::string scale_id;
  double beta = 1.0;
  int replicas = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t seed = 0;
  int m = 0;
  double margin = 0.0;      // largest margin any replica needed
  std::vector<double> values;  // per replica 2^{-nd} C
};

// Mean and standard error of the mean.
void summarize(EstimateRecord& record);

// 2^{-nd} C_{B_n} with B_n = [0, 2^n)^d, averaged over replicas.
EstimateRecord estimate_cn(int n, int d, const CostScale& scale, double beta, int replicas, std::uint64_t seed,
                           const ExperimentOptions& options = {});
// 2^{-nd} W(nu_{B_n}, pattern) for unit intensity.
EstimateRecord estimate_chat_n(int n, int d, const CostScale& scale, int replicas, std::uint64_t seed,
                               const ExperimentOptions& options = {});

// Single-replica values, exposed for common-random-number pairings.
double cn_replica(int n, int d, const CostScale& scale, double beta, std::uint64_t seed, std::uint64_t replica,
                  int m, double margin, int max_doublings, double* margin_used = nullptr);
double chat_replica(int n, int d, const CostScale& scale, std::uint64_t seed, std::uint64_t replica, int m);

struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;      // the additive term already included in rhs
  double pooled_se = 0.0;  // sqrt(se_lhs^2 + se_rhs^2), on the scale of lhs
  bool holds = false;      // lhs <= rhs + 3 pooled_se
  std::string form;
};

struct ComparisonReport {
  EstimateRecord cn;
  EstimateRecord chat;
  InequalityReport inequality;
};

// c_n <= c^_n + sqrt(2d) eps(2^n) for concave scales, and the p-th root form
// c_n^{1/p} <= c^_n^{1/p} + kappa3 2^{n(1-d/2)} for r^p with p >= 1.
ComparisonReport compare_cn_chat(int n, int d, const CostScale& scale, int replicas, std::uint64_t seed,
                                 const ExperimentOptions& options = {});

struct RecursionReport {
  EstimateRecord chat_n;
  EstimateRecord chat_next;
  double increment = 0.0;
  InequalityReport inequality;
};

// c^_{n+1} <= c^_n + increment of the modified-cost recursion.
RecursionReport recursion_check(int n, int d, const CostScale& scale, int replicas, std::uint64_t seed,
                                const ExperimentOptions& options = {});

struct StabilizationRecord {
  IntVector z;
  std::vector<int> generations;
  std::vector<double> changed_fraction;  // mean over replicas, pair (g, g+1)
  std::vector<double> changed_stderr;
  std::vector<std::vector<double>> per_replica;
  int replicas = 0;
  std::uint64_t seed = 0;
  int m = 0;
};

// Per replica: one word gamma, one pattern on B_{max_n}(z, gamma), and the
// semicouplings with the patterns restricted to B_n(z, gamma), n = 0..max_n,
// on a common lattice. Records how many probe cells change target between
// consecutive generations.
StabilizationRecord stabilization_study(const IntVector& z, std::uint64_t gamma_seed, int max_n, int d,
                                        const CostScale& scale, double beta, const Box& probe_region, int replicas,
                                        const ExperimentOptions& options = {});

struct BoundsEntry {
  int d = 0;
  std::string branch;  // "p<=1" (plain cost) or "p>=1" (p-th root)
  double lower = 0.0;
  double upper = 0.0;
  double ratio = 0.0;
  bool holds = false;
};

struct BoundsReport {
  double p = 0.0;
  std::vector<BoundsEntry> entries;
  bool skipped = false;
  std::string note;
  // limsup / liminf of c_inf^{1/p} / sqrt(d) from the large-d brackets
  double asymptotic_ratio = 0.0;
  double asymptotic_limit = 0.0;  // 2 for p <= 2, else 5
  bool asymptotic_ok = false;
  bool passed = false;
};

BoundsReport bounds_suite(int d, double p);
BoundsReport bounds_sweep(int d_from, int d_to, double p);

struct SuperadditivityReport {
  int replicas = 0;
  int within_slack = 0;  // union >= sum of children - slack
  int exact = 0;         // union >= sum of children
  double worst_gap = 0.0;  // max of (sum of children - union)
  double slack = 0.0;
  double fraction = 0.0;
  bool passed = false;
};

// C_{B_1} against the 2^d children B_0 + i, all solved on the union's lattice.
SuperadditivityReport superadditivity_harness(int d, const CostScale& scale, int replicas, std::uint64_t seed,
                                              const ExperimentOptions& options = {});

struct RescalingReport {
  EstimateRecord direct;      // beta-intensity pattern, masses 1, scale beta theta(beta^{1/d} r)
  EstimateRecord contracted;  // the same pattern contracted by beta^{1/d}, masses beta, scale theta
  InequalityReport agreement;
};

RescalingReport rescaling_consistency(int n, int d, const CostScale& scale, double beta, int replicas,
                                      std::uint64_t seed, const ExperimentOptions& options = {});

// Runs fn(r) for r in [0, replicas) on `threads` workers; results land in
// the slot of their replica so the outcome does not depend on scheduling.
std::vector<double> run_replicas(int replicas, int threads, const std::function<double(int)>& fn);

}  // namespace semicouple
