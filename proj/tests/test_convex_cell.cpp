#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "semicouple/convex_cell.hpp"

using namespace semicouple;
using Cell = ConvexCell<double>;
using P = Eigen::Vector2d;

namespace {

HalfPlane<double> hp(double nx, double ny, double off) { return {P(nx, ny), off}; }

std::vector<HalfPlane<double>> unit_square() {
  return {hp(-1, 0, 0), hp(1, 0, 1), hp(0, -1, 0), hp(0, 1, 1)};
}

bool inside(const Cell& c, const P& x) {
  for (const auto& h : c.halfplanes()) {
    if (h.normal.dot(x) > h.offset) return false;
  }
  return !c.disk() || (x - c.disk()->center).squaredNorm() <= c.disk()->radius * c.disk()->radius;
}

}  // namespace

TEST(ConvexCell, Examples) {
  EXPECT_NEAR(polygon_disk_area(Cell(unit_square(), std::nullopt)), 1.0, 1e-15);
  EXPECT_NEAR(polygon_disk_area(Cell({}, Disk<double>{P(0, 0), 1.0})), M_PI, 1e-14);
  EXPECT_NEAR(polygon_disk_area(Cell({hp(1, 0, 0)}, Disk<double>{P(0, 0), 1.0})), M_PI / 2, 1e-14);
  EXPECT_THROW(polygon_disk_area(Cell({hp(1, 0, 0)}, std::nullopt)), ArgumentError);
}

TEST(ConvexCell, SecondMoments) {
  // |x - c|^2 over the unit square about its center is 1/6
  EXPECT_NEAR(Cell(unit_square(), std::nullopt).second_moment(P(0.5, 0.5)), 1.0 / 6, 1e-14);
  // disk of radius R: pi R^4 / 2
  EXPECT_NEAR(Cell({}, Disk<double>{P(1, 2), 0.7}).second_moment(P(1, 2)), M_PI * std::pow(0.7, 4) / 2, 1e-14);
  // half disk
  EXPECT_NEAR(Cell({hp(0, 1, 0)}, Disk<double>{P(0, 0), 1.0}).second_moment(P(0, 0)), M_PI / 4, 1e-14);
}

TEST(ConvexCell, CircularSegment) {
  // chord at distance h from the center: r^2 acos(h/r) - h sqrt(r^2 - h^2)
  for (double h : {-0.6, -0.2, 0.0, 0.3, 0.9}) {
    const Cell c({hp(1, 0, h)}, Disk<double>{P(0, 0), 1.0});
    const double cap = std::acos(h) - h * std::sqrt(1 - h * h);
    EXPECT_NEAR(c.area(), M_PI - cap, 1e-13) << h;
  }
}

TEST(ConvexCell, MonteCarloArea) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<HalfPlane<double>> hs;
    for (int k = 0; k < 5; ++k) {
      const double a = 2 * M_PI * (u(gen) + 1) / 2;
      hs.push_back(hp(std::cos(a), std::sin(a), 0.1 + 0.5 * (u(gen) + 1)));
    }
    const double r = 0.3 + 0.4 * (u(gen) + 1);
    const Cell cell(hs, Disk<double>{P(0.05 * u(gen), 0.05 * u(gen)), r});
    const P lo = cell.disk()->center.array() - r;
    const double box_area = 4 * r * r;
    const int samples = 1000000;
    std::uniform_real_distribution<double> s(0.0, 1.0);
    int hits = 0;
    for (int i = 0; i < samples; ++i) {
      if (inside(cell, lo + 2 * r * P(s(gen), s(gen)))) ++hits;
    }
    const double frac = static_cast<double>(hits) / samples;
    const double se = box_area * std::sqrt(frac * (1 - frac) / samples);
    EXPECT_NEAR(cell.area(), box_area * frac, 3 * se + 1e-12) << "trial " << trial;
    EXPECT_TRUE(cell.is_convex());
  }
}

TEST(ConvexCell, BoundaryIsCounterClockwiseWithArcs) {
  const Cell c({hp(1, 0, 0)}, Disk<double>{P(0, 0), 1.0});
  const auto b = c.boundary();
  ASSERT_EQ(b.size(), 2u);
  int arcs = 0;
  for (const auto& v : b) arcs += v.arc_to_next;
  EXPECT_EQ(arcs, 1);
  EXPECT_TRUE(c.is_convex());
  EXPECT_TRUE(Cell({}, Disk<double>{P(0, 0), 1.0}).full_disk());
  const auto sq = Cell(unit_square(), std::nullopt).boundary();
  double signed_area = 0;
  for (std::size_t i = 0; i < sq.size(); ++i) {
    const P& a = sq[i].point;
    const P& q = sq[(i + 1) % sq.size()].point;
    signed_area += a.x() * q.y() - a.y() * q.x();
  }
  EXPECT_GT(signed_area, 0);
}

TEST(ConvexCell, EmptyIntersection) {
  const Cell c({hp(1, 0, -2)}, Disk<double>{P(0, 0), 1.0});
  EXPECT_EQ(c.area(), 0.0);
  EXPECT_TRUE(c.empty());
  EXPECT_TRUE(c.boundary().empty());
}
