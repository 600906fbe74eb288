#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "semicouple/semicoupling.hpp"
#include "semicouple/transport_flow.hpp"

using namespace semicouple;

namespace {

struct MatrixModel {
  std::vector<std::vector<std::int64_t>> c;
  std::vector<std::vector<char>> arc;
  std::int64_t cost(int i, int j) const { return c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  bool has_arc(int i, int j) const {
    return arc.empty() || arc[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0;
  }
};

struct Instance {
  MatrixModel model;
  std::vector<std::int64_t> supply, demand;
};

Instance random_instance(std::mt19937_64& gen, bool balanced) {
  std::uniform_int_distribution<int> sz(1, 9), kk(1, 4), units(0, 4), cost(0, 50);
  Instance in;
  const int n = sz(gen), k = kk(gen);
  in.supply.resize(static_cast<std::size_t>(n));
  for (auto& s : in.supply) s = units(gen);
  in.supply[0] += 1;
  std::int64_t total = 0;
  for (auto s : in.supply) total += s;
  in.demand.assign(static_cast<std::size_t>(k), 0);
  // spread at most the total supply over the sinks
  std::int64_t spread = balanced ? total : std::uniform_int_distribution<std::int64_t>(1, total)(gen);
  for (std::int64_t u = 0; u < spread; ++u) in.demand[static_cast<std::size_t>(gen() % static_cast<unsigned>(k))]++;
  in.model.c.assign(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(k)));
  for (auto& row : in.model.c) {
    for (auto& v : row) v = cost(gen);
  }
  return in;
}

std::vector<std::vector<flow::SinkArc>> all_arcs(const Instance& in) {
  std::vector<std::vector<flow::SinkArc>> arcs(in.demand.size());
  for (std::size_t j = 0; j < in.demand.size(); ++j) {
    for (std::size_t i = 0; i < in.supply.size(); ++i) {
      if (in.supply[i] > 0) arcs[j].push_back({in.model.c[i][j], static_cast<std::int32_t>(i)});
    }
  }
  return arcs;
}

std::int64_t flow_cost(const flow::SuccessiveShortestPaths<MatrixModel>& s, const MatrixModel& m) {
  std::int64_t c = 0;
  for (std::size_t i = 0; i < s.flows().size(); ++i) {
    for (const auto& f : s.flows()[i]) c += f.units * m.cost(static_cast<int>(i), f.sink);
  }
  return c;
}

}  // namespace

class FlowAgainstBellmanFord : public ::testing::TestWithParam<bool> {};

TEST_P(FlowAgainstBellmanFord, RandomInstances) {
  const bool balanced = GetParam();
  std::mt19937_64 gen(balanced ? 101 : 202);
  for (int trial = 0; trial < 400; ++trial) {
    const Instance in = random_instance(gen, balanced);
    flow::SuccessiveShortestPaths<MatrixModel> solver(in.model, in.supply, in.demand, all_arcs(in));
    solver.run();
    EXPECT_EQ(solver.received(), in.demand);
    EXPECT_EQ(flow_cost(solver, in.model), oracle::transport_cost(in.supply, in.demand, in.model.c)) << trial;
    const auto cert = solver.certify(!balanced);
    EXPECT_TRUE(cert.verified()) << trial;
    // supply is respected
    for (std::size_t i = 0; i < in.supply.size(); ++i) {
      std::int64_t out = 0;
      for (const auto& f : solver.flows()[i]) out += f.units;
      EXPECT_EQ(out + solver.residual_supply()[i], in.supply[i]);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Modes, FlowAgainstBellmanFord, ::testing::Values(false, true));

TEST(Flow, MissingArcShowsInCertificate) {
  // sink 0 needs one unit; the cheap source 1 is hidden from the solver
  MatrixModel m{{{10}, {1}}, {{1}, {0}}};
  std::vector<std::vector<flow::SinkArc>> arcs{{{10, 0}}};
  flow::SuccessiveShortestPaths<MatrixModel> s(m, {1, 1}, {1}, arcs);
  s.run();
  const auto cert = s.certify(true);
  EXPECT_FALSE(cert.verified());
  EXPECT_TRUE(cert.missing_arc_violated);
}

TEST(Flow, InfeasibleThrows) {
  MatrixModel m{{{1, 1}}, {}};
  std::vector<std::vector<flow::SinkArc>> arcs{{{1, 0}}, {{1, 0}}};
  flow::SuccessiveShortestPaths<MatrixModel> s(m, {1}, {1, 1}, arcs);
  EXPECT_THROW(s.run(), InfeasibleError);
}

TEST(DiscreteTransport, RadiusGrowthReachesTheOptimum) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0, 4);
  for (int trial = 0; trial < 50; ++trial) {
    DiscreteMeasure src{PointMatrix(2, 30), std::vector<std::int64_t>(30, 1)};
    DiscreteMeasure snk{PointMatrix(2, 3), {4, 3, 5}};
    for (int i = 0; i < 30; ++i) src.points.col(i) << u(gen), u(gen);
    for (int j = 0; j < 3; ++j) snk.points.col(j) << u(gen), u(gen);
    const CostScale scale = CostScale::power(trial % 2 ? 1.0 : 2.0);
    const auto t = solve_discrete_transport(src, snk, scale, 1.0, true, {0.05, 0.05, 0.05});
    EXPECT_TRUE(t.certificate.verified);
    std::vector<std::vector<std::int64_t>> cost(30, std::vector<std::int64_t>(3));
    for (int i = 0; i < 30; ++i) {
      for (int j = 0; j < 3; ++j) {
        cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            integer_cost(scale, squared_distance(src.points.col(i), snk.points.col(j)), t.cost_unit);
      }
    }
    EXPECT_EQ(t.integer_cost, oracle::transport_cost(src.units, snk.units, cost));
    EXPECT_GT(t.certificate.radius_doublings, 0);
  }
}

TEST(DiscreteTransport, MassChecks) {
  DiscreteMeasure src{PointMatrix::Zero(1, 2), {1, 1}};
  DiscreteMeasure snk{PointMatrix::Zero(1, 1), {3}};
  EXPECT_THROW(solve_discrete_transport(src, snk, CostScale::power(1), 1.0, true), InfeasibleError);
  EXPECT_THROW(solve_discrete_transport(src, snk, CostScale::power(1), 1.0, false), ArgumentError);
}
