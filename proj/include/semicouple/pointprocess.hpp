#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "semicouple/geometry.hpp"

namespace semicouple {

// Counter-based generator: the i-th output is a pure function of (key, i), so
// a replica's stream never depends on how many other replicas ran before it.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t replica, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next(); }

  std::uint64_t next();
  // uniform on [0, 1) with 53 random bits
  double uniform();
  // uniform on (0, 1)
  double uniform_open();
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

// Inversion for mean < 30, Hormann's PTRS transformed rejection otherwise.
std::int64_t sample_poisson(CounterRng& rng, double mean);

// Stream ids that keep the different random ingredients of a replica apart.
enum class Stream : std::uint64_t { Pattern = 1, Thinning = 2, Word = 3, Checker = 4, Misc = 5 };

struct PppSampler {
  double beta = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t replica_index = 0;
};

// Poisson(beta * |box|) points, i.i.d. uniform in the box.
PointPattern sample_ppp(const PppSampler& sampler, const Box& box);
PointPattern sample_ppp(const PppSampler& sampler, const DyadicBox& box);

// Keep each target independently with probability keep_prob (multiplicities
// thinned unit by unit).
PointPattern thin(const PointPattern& pattern, double keep_prob, std::uint64_t seed, std::uint64_t replica = 0);

// n i.i.d. uniform words in {0,1}^d.
std::vector<IntVector> sample_gamma_word(std::uint64_t seed, int n, int d, std::uint64_t replica = 0);

}  // namespace semicouple
