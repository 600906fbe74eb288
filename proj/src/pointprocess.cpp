#include "semicouple/pointprocess.hpp"

#include <cmath>

#include "semicouple/errors.hpp"

namespace semicouple {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr double kInversionLimit = 30.0;

std::int64_t poisson_inversion(CounterRng& rng, double mean) {
  const double u = rng.uniform();
  double p = std::exp(-mean);
  double cdf = p;
  std::int64_t k = 0;
  // the cap only matters for u within rounding of 1
  while (u >= cdf && k < 1000) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

std::int64_t poisson_ptrs(CounterRng& rng, double mean) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  while (true) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const auto k = static_cast<std::int64_t>(std::floor((2.0 * a / us + b) * u + mean + 0.43));
    if (us >= 0.07 && v <= vr) return k;
    if (k < 0 || (us < 0.013 && v > us)) continue;
    const double kd = static_cast<double>(k);
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <= -mean + kd * loglam - std::lgamma(kd + 1.0)) {
      return k;
    }
  }
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t replica, std::uint64_t stream)
    : key_(mix64(mix64(seed + kGolden) ^ mix64(replica * 2 + 1) ^ mix64(stream * kGolden + 7))) {}

std::uint64_t CounterRng::next() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double CounterRng::uniform_open() { return (static_cast<double>(next() >> 12) + 0.5) * 0x1.0p-52; }

std::int64_t sample_poisson(CounterRng& rng, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw ArgumentError("Poisson mean must be finite and nonnegative");
  if (mean == 0.0) return 0;
  if (mean < kInversionLimit) return poisson_inversion(rng, mean);
  return poisson_ptrs(rng, mean);
}

PointPattern sample_ppp(const PppSampler& sampler, const Box& box) {
  if (!(sampler.beta >= 0.0)) throw ArgumentError("intensity must be nonnegative");
  if (!(box.volume() > 0.0)) throw ArgumentError("sampling box must have positive volume");
  CounterRng rng(sampler.seed, sampler.replica_index, static_cast<std::uint64_t>(Stream::Pattern));
  const std::int64_t count = sample_poisson(rng, sampler.beta * box.volume());
  const int d = box.dim();
  PointMatrix pts(d, count);
  for (std::int64_t i = 0; i < count; ++i) {
    for (int k = 0; k < d; ++k) {
      double x = box.lower[k] + box.extent[k] * rng.uniform();
      if (x >= box.lower[k] + box.extent[k]) x = std::nextafter(box.lower[k] + box.extent[k], box.lower[k]);
      pts(k, i) = x;
    }
  }
  return PointPattern(std::move(pts), box);
}

PointPattern sample_ppp(const PppSampler& sampler, const DyadicBox& box) { return sample_ppp(sampler, box.box()); }

PointPattern thin(const PointPattern& pattern, double keep_prob, std::uint64_t seed, std::uint64_t replica) {
  if (!(keep_prob >= 0.0 && keep_prob <= 1.0)) throw ArgumentError("keep probability must lie in [0, 1]");
  CounterRng rng(seed, replica, static_cast<std::uint64_t>(Stream::Thinning));
  PointMatrix pts(pattern.dim(), pattern.size());
  std::vector<int> mult;
  int kept = 0;
  for (int i = 0; i < pattern.size(); ++i) {
    int k = 0;
    for (int u = 0; u < pattern.multiplicity(i); ++u) {
      if (rng.uniform() < keep_prob) ++k;
    }
    if (k == 0) continue;
    pts.col(kept++) = pattern.point(i);
    mult.push_back(k);
  }
  pts.conservativeResize(pattern.dim(), kept);
  return PointPattern(std::move(pts), std::move(mult), pattern.domain(), pattern.denominator());
}

std::vector<IntVector> sample_gamma_word(std::uint64_t seed, int n, int d, std::uint64_t replica) {
  if (n < 1) throw ArgumentError("doubling word length must be positive");
  if (d < 1) throw ArgumentError("doubling word dimension must be positive");
  CounterRng rng(seed, replica, static_cast<std::uint64_t>(Stream::Word));
  std::vector<IntVector> word;
  word.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    IntVector w(d);
    for (int k = 0; k < d; ++k) w[k] = static_cast<int>(rng.next() >> 63);
    word.push_back(std::move(w));
  }
  return word;
}

}  // namespace semicouple
