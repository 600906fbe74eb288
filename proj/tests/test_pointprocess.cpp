#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <cmath>

#include "semicouple/errors.hpp"
#include "semicouple/pointprocess.hpp"

using namespace semicouple;

namespace {

struct Moments {
  double mean = 0;
  double se = 0;
};

template <class F>
Moments sample_mean(int n, F f) {
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double v = f(i);
    s += v;
    s2 += v * v;
  }
  const double mean = s / n;
  const double var = (s2 - n * mean * mean) / (n - 1);
  return {mean, std::sqrt(var / n)};
}

// Pearson statistic of observed counts against Poisson(mean), pooling the
// tails so every expected count is at least 5.
double poisson_chi2_pvalue(const std::vector<int>& counts, double mean, int n) {
  const boost::math::poisson_distribution<double> dist(mean);
  std::vector<double> observed, expected;
  double acc_o = 0, acc_e = 0;
  const int kmax = static_cast<int>(counts.size());
  for (int k = 0; k < kmax; ++k) {
    acc_o += counts[static_cast<std::size_t>(k)];
    acc_e += n * boost::math::pdf(dist, k);
    if (acc_e >= 5 && n * boost::math::cdf(boost::math::complement(dist, k)) >= 5) {
      observed.push_back(acc_o);
      expected.push_back(acc_e);
      acc_o = acc_e = 0;
    }
  }
  const double tail_o = acc_o;
  const double tail_e = acc_e + n * boost::math::cdf(boost::math::complement(dist, kmax - 1));
  observed.push_back(tail_o);
  expected.push_back(tail_e);
  double stat = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) stat += std::pow(observed[i] - expected[i], 2) / expected[i];
  const boost::math::chi_squared_distribution<double> chi(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(chi, stat));
}

}  // namespace

TEST(CounterRng, PureFunctionOfKey) {
  CounterRng a(7, 3, 1), b(7, 3, 1), c(7, 4, 1), e(7, 3, 2);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_NE(x, c.next());
    EXPECT_NE(x, e.next());
  }
  CounterRng u(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
    const double w = u.uniform_open();
    EXPECT_GT(w, 0.0);
    EXPECT_LT(w, 1.0);
  }
}

TEST(SamplePoisson, MatchesDistribution) {
  for (double mean : {0.7, 5.0, 29.0, 31.0, 200.0}) {
    const int n = 20000;
    CounterRng rng(42, static_cast<std::uint64_t>(mean * 10), 9);
    std::vector<int> counts(static_cast<std::size_t>(mean * 4 + 40), 0);
    for (int i = 0; i < n; ++i) {
      const auto k = sample_poisson(rng, mean);
      counts[static_cast<std::size_t>(std::min<std::int64_t>(k, static_cast<std::int64_t>(counts.size()) - 1))]++;
    }
    EXPECT_GT(poisson_chi2_pvalue(counts, mean, n), 0.01) << "mean " << mean;
  }
  CounterRng rng(1, 1);
  EXPECT_EQ(sample_poisson(rng, 0.0), 0);
  EXPECT_THROW(sample_poisson(rng, -1.0), ArgumentError);
}

TEST(SamplePpp, MeanCounts) {
  const int reps = 100000;
  const auto unit = sample_mean(reps, [](int r) {
    return static_cast<double>(sample_ppp({1.0, 5, static_cast<std::uint64_t>(r)}, Box::unit(2)).size());
  });
  EXPECT_NEAR(unit.mean, 1.0, 3 * unit.se);
  const auto half = sample_mean(reps, [](int r) {
    return static_cast<double>(
        sample_ppp({0.5, 6, static_cast<std::uint64_t>(r)}, Box::cube(Vector::Zero(2), 2.0)).size());
  });
  EXPECT_NEAR(half.mean, 2.0, 3 * half.se);
}

TEST(SamplePpp, DeterministicAndInsideBox) {
  const Box b{Vector::Constant(2, -1.0), Vector::Constant(2, 3.0)};
  const PointPattern p = sample_ppp({1.0, 99, 4}, b);
  const PointPattern q = sample_ppp({1.0, 99, 4}, b);
  EXPECT_EQ(p.points(), q.points());
  EXPECT_GT(p.size(), 0);
  for (int i = 0; i < p.size(); ++i) EXPECT_TRUE(b.contains(p.point(i)));
  EXPECT_THROW(sample_ppp({1.0, 1, 0}, Box{Vector::Zero(2), Vector::Zero(2)}), ArgumentError);
}

TEST(SamplePpp, UniformCoordinates) {
  // marginal of the first coordinate over 10 bins
  std::vector<int> bins(10, 0);
  int total = 0;
  for (int r = 0; r < 2000; ++r) {
    const PointPattern p = sample_ppp({1.0, 3, static_cast<std::uint64_t>(r)}, Box::cube(Vector::Zero(2), 4.0));
    for (int i = 0; i < p.size(); ++i) {
      bins[static_cast<std::size_t>(p.point(i)[0] / 0.4)]++;
      ++total;
    }
  }
  double stat = 0;
  for (int b : bins) stat += std::pow(b - total / 10.0, 2) / (total / 10.0);
  const boost::math::chi_squared_distribution<double> chi(9);
  EXPECT_GT(boost::math::cdf(boost::math::complement(chi, stat)), 0.01);
}

TEST(Thin, Extremes) {
  const PointPattern p = sample_ppp({1.0, 8, 0}, Box::cube(Vector::Zero(2), 4.0));
  const PointPattern same = thin(p, 1.0, 1);
  EXPECT_EQ(same.points(), p.points());
  EXPECT_EQ(same.multiplicities(), p.multiplicities());
  EXPECT_TRUE(thin(p, 0.0, 1).empty());
  EXPECT_THROW(thin(p, 1.5, 1), ArgumentError);
}

TEST(Thin, EmpiricalIntensity) {
  const Box b = Box::cube(Vector::Zero(2), 8.0);
  const int reps = 10000;
  const auto m = sample_mean(reps, [&](int r) {
    const auto rr = static_cast<std::uint64_t>(r);
    return thin(sample_ppp({1.0, 12, rr}, b), 0.5, 13, rr).total_mass() / b.volume();
  });
  EXPECT_NEAR(m.mean, 0.5, 3 * m.se);
}

TEST(Thin, CountsMatchThinnedPoisson) {
  // thin(PPP(0.8), 0.5) against Poisson(0.4 |B|)
  const Box b = Box::cube(Vector::Zero(2), 3.0);
  const int reps = 10000;
  const double mean = 0.4 * b.volume();
  std::vector<int> counts(40, 0);
  for (int r = 0; r < reps; ++r) {
    const auto rr = static_cast<std::uint64_t>(r);
    const auto k = thin(sample_ppp({0.8, 21, rr}, b), 0.5, 22, rr).total_multiplicity();
    counts[static_cast<std::size_t>(std::min<long long>(k, 39))]++;
  }
  EXPECT_GT(poisson_chi2_pvalue(counts, mean, reps), 0.01);
}

TEST(GammaWord, ShapeDeterminismFairness) {
  const auto w = sample_gamma_word(5, 3, 2);
  ASSERT_EQ(w.size(), 3u);
  for (const auto& g : w) {
    ASSERT_EQ(g.size(), 2);
    for (int k = 0; k < 2; ++k) EXPECT_TRUE(g[k] == 0 || g[k] == 1);
  }
  EXPECT_EQ(sample_gamma_word(5, 3, 2), w);
  const auto m = sample_mean(100000, [](int r) {
    return static_cast<double>(sample_gamma_word(17, 1, 1, static_cast<std::uint64_t>(r))[0][0]);
  });
  EXPECT_NEAR(m.mean, 0.5, 3 * m.se);
  EXPECT_THROW(sample_gamma_word(1, 0, 2), ArgumentError);
}
