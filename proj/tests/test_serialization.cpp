#include <gtest/gtest.h>

#include <random>

#include "semicouple/errors.hpp"
#include "semicouple/serialization.hpp"
#include "semicouple/svg.hpp"

using namespace semicouple;

namespace {

PointPattern uniform_pattern(std::uint64_t seed, int n, int d, double side) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, side);
  PointMatrix m(d, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) m(k, i) = u(gen);
  }
  return PointPattern(m, Box::cube(Vector::Zero(d), side));
}

TransportPlan solved(const PointPattern& pattern, const CostScale& scale, int m) {
  const GridMeasure grid(pattern.domain().enlarged(1.5), m);
  return solve_semicoupling(grid, pattern, scale).plan;
}

int count(const std::string& s, const std::string& what) {
  int n = 0;
  for (std::size_t at = s.find(what); at != std::string::npos; at = s.find(what, at + 1)) ++n;
  return n;
}

}  // namespace

TEST(ScaleJson, RoundTrip) {
  const std::vector<CostScale> scales = {CostScale::power(2.0), CostScale::concave_log(2, 1.5),
                                         CostScale::table({{0.0, 0.0}, {1.0, 0.5}, {3.0, 1.0}}),
                                         CostScale::power(0.5).with_multipliers(2.0, 3.0)};
  for (const auto& s : scales) {
    const CostScale back = scale_from_json(scale_to_json(s));
    EXPECT_EQ(back.id(), s.id());
    for (double r : {0.0, 0.3, 1.0, 2.7}) EXPECT_EQ(back(r), s(r));
  }
  EXPECT_EQ(scale_to_json(CostScale::power(2.0)), Json::parse(R"({"kind":"power","p":2.0})"));
  EXPECT_THROW(scale_from_json(Json::parse(R"({"kind":"cubic"})")), ArgumentError);
  EXPECT_THROW(scale_from_json(Json::parse(R"({"p":2})")), ArgumentError);
}

TEST(PlanJson, RoundTripIsIdentity) {
  for (double p : {1.0, 2.0, 4.0}) {
    const PointPattern pattern = uniform_pattern(static_cast<std::uint64_t>(p * 10), 12, 2, 4.0);
    const TransportPlan plan = solved(pattern, CostScale::power(p), 8);
    const Json j = plan_to_json(plan);
    const TransportPlan back = plan_from_json(Json::parse(dump(j)));
    EXPECT_EQ(back.assignment, plan.assignment);
    EXPECT_EQ(back.target_received, plan.target_received);
    EXPECT_EQ(back.target_demand, plan.target_demand);
    EXPECT_EQ(back.total_cost, plan.total_cost);
    EXPECT_EQ(back.integer_cost, plan.integer_cost);
    EXPECT_EQ(back.cost_unit, plan.cost_unit);
    EXPECT_EQ(back.grid.num_cells(), plan.grid.num_cells());
    EXPECT_EQ(back.grid.cell_mass(), plan.grid.cell_mass());
    EXPECT_EQ(back.grid.lower(), plan.grid.lower());
    EXPECT_EQ(back.pattern.points(), plan.pattern.points());
    EXPECT_EQ(back.pattern.multiplicities(), plan.pattern.multiplicities());
    EXPECT_EQ(back.scale.id(), plan.scale.id());
    EXPECT_EQ(plan_to_json(back), j);
  }
}

TEST(PlanJson, MaskAndFractionalMassesSurvive) {
  PointMatrix pts(2, 2);
  pts << 0.5, 1.5, 0.5, 0.5;
  const PointPattern pattern(pts, {1, 3}, Box::cube(Vector::Zero(2), 2.0), 9);
  GridMeasure grid(pattern.domain().enlarged(1.0), 12);
  std::vector<std::uint8_t> mask(grid.num_cells(), 1);
  for (std::size_t c = 0; c < mask.size(); c += 7) mask[c] = 0;
  grid.set_mask(mask);
  const TransportPlan plan = solve_semicoupling(grid, pattern, CostScale::power(1.0)).plan;
  const TransportPlan back = plan_from_json(plan_to_json(plan));
  EXPECT_EQ(back.grid.mask(), mask);
  EXPECT_EQ(back.pattern.denominator(), 9);
  EXPECT_EQ(back.assignment, plan.assignment);
  EXPECT_EQ(plan_to_json(back), plan_to_json(plan));
}

TEST(PlanJson, RejectsOtherDocuments) {
  const PointPattern pattern = uniform_pattern(3, 3, 2, 2.0);
  Json j = plan_to_json(solved(pattern, CostScale::power(2.0), 4));
  Json wrong = j;
  wrong["schema"] = "semicouple.diagram";
  EXPECT_THROW(plan_from_json(wrong), ArgumentError);
  wrong = j;
  wrong["schema_version"] = 99;
  EXPECT_THROW(plan_from_json(wrong), ArgumentError);
  wrong = j;
  wrong["assignment"] = Json::parse("[[0, 3]]");
  EXPECT_THROW(plan_from_json(wrong), ArgumentError);
}

TEST(DiagramJson, RoundTripIsIdentity) {
  const PointPattern pattern = uniform_pattern(21, 9, 2, 3.0);
  const LaguerreDiagram diagram = solve_laguerre(pattern);
  const Json j = diagram_to_json(diagram);
  const LaguerreDiagram back = diagram_from_json(Json::parse(dump(j)));
  EXPECT_EQ(back.weights, diagram.weights);
  EXPECT_EQ(back.areas, diagram.areas);
  EXPECT_EQ(back.cost, diagram.cost);
  ASSERT_EQ(back.cells.size(), diagram.cells.size());
  for (std::size_t c = 0; c < back.cells.size(); ++c) EXPECT_EQ(back.cells[c].area(), diagram.cells[c].area());
  EXPECT_EQ(diagram_to_json(back), j);
}

TEST(EstimatesCsv, HeaderAndRows) {
  EstimateRecord r;
  r.quantity = "c_n";
  r.n = 1;
  r.d = 2;
  r.scale_id = "power:2";
  r.beta = 0.25;
  r.replicas = 30;
  r.mean = 0.1;
  r.stderr_ = 0.5;
  r.seed = 18446744073709551615ull;
  const std::string csv = estimates_csv({r});
  EXPECT_EQ(csv, "quantity,n,d,scale,beta,replicas,mean,stderr,seed\n"
                 "c_n,1,2,power:2,0.25,30,0.10000000000000001,0.5,18446744073709551615\n");
  EXPECT_EQ(estimates_csv({}), "quantity,n,d,scale,beta,replicas,mean,stderr,seed\n");
}

TEST(ReportJson, CheckAndEstimateFields) {
  CheckReport c;
  c.check_name = "volumes";
  c.passed = true;
  c.samples_tested = 4;
  const Json j = check_to_json(c);
  EXPECT_EQ(j["check"], "volumes");
  EXPECT_EQ(j["passed"], true);
  EXPECT_EQ(j["samples_tested"], 4);
  EstimateRecord e;
  e.seed = 7;
  e.m = 32;
  const Json k = estimate_to_json(e);
  EXPECT_EQ(k["seed"], 7);
  EXPECT_EQ(k["m"], 32);
  EXPECT_EQ(dump(Json::object()), "{}\n");
}

TEST(Svg, DeterministicAndColoured) {
  const PointPattern pattern = uniform_pattern(5, 6, 2, 3.0);
  const TransportPlan plan = solved(pattern, CostScale::power(2.0), 8);
  const std::string a = render_svg(plan), b = render_svg(plan_from_json(plan_to_json(plan)));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rfind("<svg", 0), 0u);
  EXPECT_EQ(count(a, "<circle"), 6);
  for (int j = 0; j < 6; ++j) EXPECT_NE(a.find(target_color(j)), std::string::npos) << j;
  EXPECT_NE(target_color(0), target_color(1));
  EXPECT_EQ(target_color(3).size(), 7u);
  const LaguerreDiagram diagram = solve_laguerre(pattern);
  EXPECT_EQ(render_svg(diagram), render_svg(diagram));
}

TEST(Svg, SinglePointIsOneDisk) {
  PointMatrix pts(2, 1);
  pts << 2.0, 2.0;
  const PointPattern pattern(pts, Box::cube(Vector::Zero(2), 4.0));
  const std::string s = render_svg(solve_laguerre(pattern));
  EXPECT_EQ(count(s, "<path"), 0);
  // the disk plus the target marker
  EXPECT_EQ(count(s, "<circle"), 2);
  EXPECT_NE(s.find(target_color(0)), std::string::npos);
}

TEST(Svg, EmptyPlanIsBlankCanvas) {
  const PointPattern empty(Box::cube(Vector::Zero(2), 2.0));
  const TransportPlan plan = solved(empty, CostScale::power(2.0), 4);
  const std::string s = render_svg(plan);
  EXPECT_EQ(count(s, "<circle"), 0);
  EXPECT_EQ(count(s, "<rect"), 1);
}

TEST(Svg, OnlyPlanarInput) {
  const PointPattern line = uniform_pattern(1, 3, 1, 4.0);
  EXPECT_THROW(render_svg(solved(line, CostScale::power(1.0), 8)), UnsupportedError);
  const PointPattern cube = uniform_pattern(1, 2, 3, 2.0);
  EXPECT_THROW(render_svg(solved(cube, CostScale::power(1.0), 4)), UnsupportedError);
}
