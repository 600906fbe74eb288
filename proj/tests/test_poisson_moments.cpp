#include <gtest/gtest.h>

#include <boost/math/distributions/poisson.hpp>
#include <cmath>

#include "semicouple/errors.hpp"
#include "semicouple/poisson_moments.hpp"

using namespace semicouple;

namespace {

// E[f(Z)] from Boost's pmf, summed far past the bulk.
template <class F>
double boost_expectation(double alpha, F f, int first = 0) {
  const boost::math::poisson_distribution<double> dist(alpha);
  const int last = static_cast<int>(alpha + 40 * std::sqrt(alpha) + 80);
  double acc = 0;
  for (int j = first; j <= last; ++j) acc += boost::math::pdf(dist, j) * f(static_cast<double>(j));
  return acc;
}

}  // namespace

TEST(PoissonMoments, RawExamples) {
  EXPECT_NEAR(poisson_raw_moment(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(poisson_raw_moment(2, 2), 6.0, 1e-14);
  EXPECT_NEAR(poisson_raw_moment(1, 3), 5.0, 1e-14);
  EXPECT_THROW(poisson_raw_moment(1, 21), ArgumentError);
}

TEST(PoissonMoments, TouchardAgainstSeries) {
  for (double a : {1.0, 2.0, 4.0, 16.0}) {
    for (int n = 1; n <= 8; ++n) {
      const double ref = boost_expectation(a, [n](double j) { return std::pow(j, n); });
      EXPECT_LE(std::abs(poisson_raw_moment(a, n) - ref), 1e-9 * std::max(1.0, ref)) << a << " " << n;
    }
  }
}

TEST(PoissonMoments, CentralExamples) {
  EXPECT_NEAR(poisson_central_moment(1, 2), 1.0, 1e-13);
  EXPECT_NEAR(poisson_central_moment(1, 4), 4.0, 1e-12);
  EXPECT_NEAR(poisson_central_moment(4, 4), 52.0, 1e-10);
  EXPECT_THROW(poisson_central_moment(1, 3), ArgumentError);
  for (double a : {1.0, 2.5, 16.0}) {
    for (int p : {2, 4, 6, 8}) {
      const double ref = boost_expectation(a, [a, p](double j) { return std::pow(j - a, p); });
      EXPECT_NEAR(poisson_central_moment(a, p), ref, 1e-8 * ref);
      EXPECT_NEAR(poisson_abs_central_moment(a, p), ref, 1e-9 * ref);
    }
  }
}

TEST(PoissonMoments, InverseExamples) {
  // sum_{j>=1} e^{-1} / (j j!)
  double ref = 0, fact = 1;
  for (int j = 1; j < 30; ++j) {
    fact *= j;
    ref += std::exp(-1.0) / (j * fact);
  }
  EXPECT_NEAR(poisson_inverse_moment(1, 1, 1e-12), ref, 1e-12);
  EXPECT_NEAR(ref, 0.4848, 1e-4);
  const double big = poisson_inverse_moment(100, 1);
  EXPECT_GE(big, 1.0 / 110);
  EXPECT_LE(big, 1.0 / 95);
  EXPECT_NEAR(poisson_inverse_moment(1, 0), 1 - std::exp(-1.0), 1e-14);
  for (double a : {1.0, 4.0, 30.0}) {
    for (double p : {0.5, 1.5, 3.0}) {
      const double r = boost_expectation(a, [p](double j) { return std::pow(j, -p); }, 1);
      EXPECT_NEAR(poisson_inverse_moment(a, p), r, 1e-12 * std::max(1.0, r));
    }
  }
}

TEST(PoissonMoments, FractionalAbsoluteMoments) {
  for (double a : {1.0, 7.0, 100.0}) {
    for (double p : {0.5, 1.5, 2.5}) {
      const double raw = boost_expectation(a, [p](double j) { return std::pow(j, p); });
      const double cen = boost_expectation(a, [a, p](double j) { return std::pow(std::abs(j - a), p); });
      EXPECT_NEAR(poisson_abs_moment(a, p), raw, 1e-10 * raw);
      EXPECT_NEAR(poisson_abs_central_moment(a, p), cen, 1e-10 * cen);
    }
  }
}

TEST(PoissonMoments, Constants) {
  EXPECT_EQ(moment_constant_raw(1), 1.0);
  EXPECT_EQ(moment_constant_raw(2), 4.0);
  EXPECT_EQ(moment_constant_raw(3), 27.0);
  EXPECT_NEAR(moment_constant_raw(1.5), std::pow(2.0, 1.5), 1e-15);
  EXPECT_NEAR(moment_constant_raw_alt(4), 8.0 * 6.0, 1e-12);
  EXPECT_NEAR(moment_constant_inverse(1), 2.0, 1e-12);
  EXPECT_NEAR(moment_constant_inverse(2.5), 24.0, 1e-12);
  EXPECT_NEAR(moment_constant_central(2), 2.0, 1e-12);
  EXPECT_NEAR(moment_constant_central(4), 8.0 * 6.0, 1e-12);
}

TEST(PoissonMoments, BoundExamples) {
  const MomentReport r = check_moment_bounds(1, 2);
  EXPECT_DOUBLE_EQ(r.raw_moment, 2.0);
  EXPECT_TRUE(r.raw_ok);
  // the sharp central constant at p = 2 is 1: the variance equals alpha
  EXPECT_NEAR(r.central_moment, 1.0, 1e-13);
  EXPECT_LE(r.central_moment, 1.0 * std::pow(1.0, 1.0) + 1e-13);
  EXPECT_TRUE(r.central_ok);
  const MomentReport s = check_moment_bounds(16, 3);
  EXPECT_EQ(s.raw_constant, 27.0);
  EXPECT_NEAR(s.raw_moment, 16.0 * 16 * 16 + 3 * 16.0 * 16 + 16, 1e-9);
  EXPECT_TRUE(s.bound_satisfied);
  // 3 a^2 + a exceeds 2 a^2 at a = 1
  EXPECT_GT(poisson_central_moment(1, 4), 2.0);
}

TEST(PoissonMoments, GeneralConstantsHold) {
  for (double p : {1.0, 1.5, 2.0, 3.0, 4.0}) {
    for (double a : {1.0, 2.0, 4.0, 16.0, 100.0}) {
      const MomentReport r = check_moment_bounds(a, p);
      EXPECT_TRUE(r.raw_ok) << p << " " << a;
      EXPECT_TRUE(r.inverse_ok) << p << " " << a;
      EXPECT_TRUE(r.central_ok) << p << " " << a;
      EXPECT_TRUE(r.bound_satisfied);
    }
  }
  EXPECT_THROW(check_moment_bounds(0.5, 1), ArgumentError);
}

TEST(RateFunction, Values) {
  EXPECT_EQ(rate_function(1, 1), 0.0);
  EXPECT_NEAR(rate_function(1, 3), 3 * std::log(3.0) - 2, 1e-15);
  EXPECT_NEAR(rate_function(1, 3), 1.2958, 1e-4);
  EXPECT_NEAR(rate_function(0.5, 0.5), 0.0, 1e-16);
  EXPECT_THROW(rate_function(1, 0), ArgumentError);
  // convex in t
  for (double t = 0.1; t < 5; t += 0.1) {
    EXPECT_GE(rate_function(0.7, t - 0.05) + rate_function(0.7, t + 0.05), 2 * rate_function(0.7, t) - 1e-14);
  }
}
