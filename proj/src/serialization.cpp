#include "semicouple/serialization.hpp"

#include <cinttypes>
#include <cstdio>

#include "semicouple/errors.hpp"

namespace semicouple {

namespace {

Json vector_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v[k]);
  return a;
}

Vector vector_from(const Json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<Eigen::Index>(k)] = j[k].get<double>();
  return v;
}

template <class T>
Json rle(const std::vector<T>& values) {
  Json out = Json::array();
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    out.push_back(Json::array({static_cast<long long>(values[i]), j - i}));
    i = j;
  }
  return out;
}

template <class T>
std::vector<T> unrle(const Json& j) {
  std::vector<T> out;
  for (const auto& run : j) {
    const auto value = static_cast<T>(run.at(0).get<long long>());
    const auto count = run.at(1).get<std::size_t>();
    out.insert(out.end(), count, value);
  }
  return out;
}

void require_schema(const Json& j, const char* name, int version) {
  if (!j.is_object() || j.value("schema", "") != name) {
    throw ArgumentError(std::string("expected a ") + name + " document");
  }
  if (j.value("schema_version", 0) != version) throw ArgumentError(std::string("unsupported ") + name + " version");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Json scale_to_json(const CostScale& scale) {
  Json j;
  switch (scale.kind()) {
    case CostScale::Kind::Power:
      j = {{"kind", "power"}, {"p", scale.exponent()}};
      break;
    case CostScale::Kind::ConcaveLog:
      j = {{"kind", "concave_log"}, {"d", scale.dimension_hint()}, {"alpha", scale.alpha()}};
      break;
    case CostScale::Kind::Table: {
      Json bp = Json::array();
      for (const auto& [r, t] : scale.breakpoints()) bp.push_back({r, t});
      j = {{"kind", "table"}, {"breakpoints", bp}};
      break;
    }
  }
  if (!scale.unit_multipliers()) {
    j["outer"] = scale.outer();
    j["inner"] = scale.inner();
  }
  return j;
}

CostScale scale_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ArgumentError("scale needs a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  CostScale s = CostScale::power(1.0);
  if (kind == "power") {
    s = CostScale::power(j.at("p").get<double>());
  } else if (kind == "concave_log") {
    s = CostScale::concave_log(j.at("d").get<int>(), j.at("alpha").get<double>());
  } else if (kind == "table") {
    std::vector<std::pair<double, double>> bp;
    for (const auto& e : j.at("breakpoints")) bp.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    s = CostScale::table(std::move(bp));
  } else {
    throw ArgumentError("unknown scale kind \"" + kind + "\"");
  }
  if (j.contains("outer") || j.contains("inner")) s = s.with_multipliers(j.value("outer", 1.0), j.value("inner", 1.0));
  return s;
}

Json box_to_json(const Box& box) { return {{"lower", vector_json(box.lower)}, {"extent", vector_json(box.extent)}}; }

Box box_from_json(const Json& j) {
  Box b{vector_from(j.at("lower")), vector_from(j.at("extent"))};
  if (b.lower.size() != b.extent.size() || b.lower.size() == 0) throw ArgumentError("malformed box");
  return b;
}

Json pattern_to_json(const PointPattern& pattern) {
  Json pts = Json::array();
  for (int i = 0; i < pattern.size(); ++i) pts.push_back(vector_json(pattern.point(i)));
  return {{"domain", box_to_json(pattern.domain())},
          {"denominator", pattern.denominator()},
          {"points", pts},
          {"multiplicities", pattern.multiplicities()}};
}

PointPattern pattern_from_json(const Json& j) {
  const Box domain = box_from_json(j.at("domain"));
  const auto& pts = j.at("points");
  PointMatrix m(domain.dim(), static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].size() != static_cast<std::size_t>(domain.dim())) throw ArgumentError("point dimension mismatch");
    m.col(static_cast<Eigen::Index>(i)) = vector_from(pts[i]);
  }
  std::vector<int> mult = j.contains("multiplicities") ? j.at("multiplicities").get<std::vector<int>>()
                                                       : std::vector<int>(pts.size(), 1);
  return PointPattern(std::move(m), std::move(mult), domain, j.value("denominator", 1));
}

Json grid_to_json(const GridMeasure& grid) {
  Json j = {{"lower", vector_json(grid.lower())},
            {"counts", grid.counts()},
            {"m", grid.m()},
            {"cell_mass", grid.cell_mass()}};
  if (!grid.mask().empty()) j["mask"] = rle(grid.mask());
  return j;
}

GridMeasure grid_from_json(const Json& j) {
  const Vector lower = vector_from(j.at("lower"));
  const auto counts = j.at("counts").get<std::vector<int>>();
  const int m = j.at("m").get<int>();
  if (counts.size() != static_cast<std::size_t>(lower.size())) throw ArgumentError("grid counts and lower disagree");
  Vector extent(lower.size());
  for (std::size_t k = 0; k < counts.size(); ++k) extent[static_cast<Eigen::Index>(k)] = static_cast<double>(counts[k]) / m;
  GridMeasure g(Box{lower, extent}, m);
  g.set_cell_mass(j.at("cell_mass").get<double>());
  if (j.contains("mask")) g.set_mask(unrle<std::uint8_t>(j.at("mask")));
  return g;
}

Json plan_to_json(const TransportPlan& plan) {
  return {{"schema", "semicouple.plan"},
          {"schema_version", kPlanSchemaVersion},
          {"scale", scale_to_json(plan.scale)},
          {"grid", grid_to_json(plan.grid)},
          {"pattern", pattern_to_json(plan.pattern)},
          {"assignment", rle(plan.assignment)},
          {"target_received", plan.target_received},
          {"target_demand", plan.target_demand},
          {"total_cost", plan.total_cost},
          {"cost_unit", plan.cost_unit},
          {"integer_cost", plan.integer_cost}};
}

TransportPlan plan_from_json(const Json& j) {
  require_schema(j, "semicouple.plan", kPlanSchemaVersion);
  TransportPlan plan{grid_from_json(j.at("grid")), pattern_from_json(j.at("pattern")), scale_from_json(j.at("scale")),
                     unrle<int>(j.at("assignment")),
                     j.at("target_received").get<std::vector<std::int64_t>>(),
                     j.at("target_demand").get<std::vector<std::int64_t>>(),
                     j.at("total_cost").get<double>(),
                     j.at("cost_unit").get<double>(),
                     j.at("integer_cost").get<std::int64_t>()};
  if (plan.assignment.size() != plan.grid.num_cells()) throw ArgumentError("assignment length does not match the grid");
  for (int a : plan.assignment) {
    if (a < kInactive || a >= plan.pattern.size()) throw ArgumentError("assignment refers to a missing target");
  }
  const auto targets = static_cast<std::size_t>(plan.pattern.size());
  if (plan.target_received.size() != targets || plan.target_demand.size() != targets) {
    throw ArgumentError("per-target counts do not match the pattern");
  }
  return plan;
}

Json diagram_to_json(const LaguerreDiagram& diagram) {
  Json cells = Json::array();
  for (const auto& cell : diagram.cells) {
    Json verts = Json::array();
    for (const auto& v : cell.boundary()) verts.push_back({v.point.x(), v.point.y(), v.arc_to_next});
    cells.push_back({{"area", cell.area()}, {"full_disk", cell.full_disk()}, {"boundary", verts}});
  }
  return {{"schema", "semicouple.diagram"},
          {"schema_version", kDiagramSchemaVersion},
          {"pattern", pattern_to_json(diagram.pattern)},
          {"weights", vector_json(diagram.weights)},
          {"areas", vector_json(diagram.areas)},
          {"cost", diagram.cost},
          {"iterations", diagram.iterations},
          {"residual", diagram.residual},
          {"cells", cells}};
}

LaguerreDiagram diagram_from_json(const Json& j) {
  require_schema(j, "semicouple.diagram", kDiagramSchemaVersion);
  PointPattern pattern = pattern_from_json(j.at("pattern"));
  Eigen::VectorXd weights = vector_from(j.at("weights"));
  DiagramEvaluation eval = diagram_cost_and_grad(pattern, weights);
  return LaguerreDiagram{std::move(pattern), std::move(weights), std::move(eval.cells), vector_from(j.at("areas")),
                         j.at("cost").get<double>(), j.at("iterations").get<int>(), j.at("residual").get<double>()};
}

Json check_to_json(const CheckReport& r) {
  return {{"check", r.check_name},       {"passed", r.passed},          {"skipped", r.skipped},
          {"worst_violation", r.worst_violation}, {"samples_tested", r.samples_tested}, {"details", r.details}};
}

Json estimate_to_json(const EstimateRecord& r) {
  return {{"quantity", r.quantity}, {"n", r.n},           {"d", r.d},         {"scale", r.scale_id},
          {"beta", r.beta},         {"replicas", r.replicas}, {"mean", r.mean}, {"stderr", r.stderr_},
          {"seed", r.seed},         {"m", r.m},           {"margin", r.margin}};
}

Json inequality_to_json(const InequalityReport& r) {
  return {{"name", r.name}, {"form", r.form},   {"lhs", r.lhs},           {"rhs", r.rhs},
          {"slack", r.slack}, {"pooled_se", r.pooled_se}, {"holds", r.holds}};
}

Json stabilization_to_json(const StabilizationRecord& r) {
  Json z = Json::array();
  for (Eigen::Index k = 0; k < r.z.size(); ++k) z.push_back(r.z[k]);
  return {{"z", z},
          {"generations", r.generations},
          {"changed_fraction", r.changed_fraction},
          {"changed_stderr", r.changed_stderr},
          {"replicas", r.replicas},
          {"seed", r.seed},
          {"m", r.m}};
}

Json bounds_to_json(const BoundsReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"d", e.d}, {"branch", e.branch}, {"lower", e.lower}, {"upper", e.upper}, {"ratio", e.ratio},
                       {"holds", e.holds}});
  }
  return {{"p", r.p},
          {"entries", entries},
          {"skipped", r.skipped},
          {"note", r.note},
          {"asymptotic_ratio", r.asymptotic_ratio},
          {"asymptotic_limit", r.asymptotic_limit},
          {"asymptotic_ok", r.asymptotic_ok},
          {"passed", r.passed}};
}

std::string estimates_csv(const std::vector<EstimateRecord>& records) {
  std::string out = "quantity,n,d,scale,beta,replicas,mean,stderr,seed\n";
  for (const auto& r : records) {
    char seed[32];
    std::snprintf(seed, sizeof seed, "%" PRIu64, r.seed);
    out += r.quantity + "," + std::to_string(r.n) + "," + std::to_string(r.d) + "," + r.scale_id + "," +
           format_double(r.beta) + "," + std::to_string(r.replicas) + "," + format_double(r.mean) + "," +
           format_double(r.stderr_) + "," + seed + "\n";
  }
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace semicouple
