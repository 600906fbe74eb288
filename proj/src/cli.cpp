#include "semicouple/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "semicouple/errors.hpp"
#include "semicouple/pointprocess.hpp"
#include "semicouple/svg.hpp"

namespace semicouple {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kCommands = {"solve", "laguerre", "estimate", "stabilize", "check", "bounds", "render"};

int solve_resolution(int d) { return d == 1 ? 512 : d == 2 ? 64 : 16; }

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_')) c = '-';
  }
  return s;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write " + path.string());
  out << text;
}

Json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ArgumentError(path + ": " + e.what());
  }
}

template <class T>
T get(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ArgumentError(std::string("config key \"") + key + "\" has the wrong type");
  }
}

Box default_domain(const RunConfig& c) {
  if (!c.params["domain"].is_null()) {
    const Box b = box_from_json(c.params["domain"]);
    if (b.dim() != c.d) throw ArgumentError("domain dimension differs from d");
    return b;
  }
  const int count = c.params["points"].is_null() ? get<int>(c.params, "num_points")
                                                 : static_cast<int>(c.params["points"].size());
  const double side = std::max(1.0, std::ceil(std::pow(std::max(count, 1), 1.0 / c.d) - 1e-9));
  return Box::cube(Vector::Zero(c.d), side);
}

PointPattern config_pattern(const RunConfig& c) {
  const Box domain = default_domain(c);
  PointMatrix pts;
  if (!c.params["points"].is_null()) {
    const auto& list = c.params["points"];
    pts.resize(c.d, static_cast<Eigen::Index>(list.size()));
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!list[i].is_array() || list[i].size() != static_cast<std::size_t>(c.d)) {
        throw ArgumentError("every point needs d coordinates");
      }
      for (int a = 0; a < c.d; ++a) pts(a, static_cast<Eigen::Index>(i)) = list[i][static_cast<std::size_t>(a)].get<double>();
    }
  } else {
    const int count = get<int>(c.params, "num_points");
    if (count < 0) throw ArgumentError("num_points must be nonnegative");
    CounterRng rng(c.seed, 0, static_cast<std::uint64_t>(Stream::Misc));
    pts.resize(c.d, count);
    for (int i = 0; i < count; ++i) {
      for (int a = 0; a < c.d; ++a) pts(a, i) = domain.lower[a] + domain.extent[a] * rng.uniform();
    }
  }
  const int mult = get<int>(c.params, "multiplicity");
  const int denom = get<int>(c.params, "denominator");
  if (mult < 1 || denom < 1) throw ArgumentError("multiplicity and denominator must be positive");
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    if (!domain.contains(pts.col(i))) throw ArgumentError("point outside the domain");
  }
  std::vector<int> mults(static_cast<std::size_t>(pts.cols()), mult);
  return PointPattern(std::move(pts), std::move(mults), domain, denom);
}

std::vector<Box> random_sub_boxes(const Box& domain, int count, std::uint64_t seed) {
  CounterRng rng(seed, 0, static_cast<std::uint64_t>(Stream::Checker));
  std::vector<Box> out;
  for (int b = 0; b < count; ++b) {
    Vector ext(domain.dim()), lo(domain.dim());
    for (int a = 0; a < domain.dim(); ++a) {
      ext[a] = domain.extent[a] * (0.25 + 0.25 * rng.uniform());
      lo[a] = domain.lower[a] + (domain.extent[a] - ext[a]) * rng.uniform();
    }
    out.push_back(Box{lo, ext});
  }
  return out;
}

struct Outcome {
  Json report = Json::object();
  std::vector<CheckReport> checks;
  std::vector<std::string> artifacts;
};

void emit(Outcome& o, const RunConfig& c, const std::string& name, const std::string& text) {
  write_file(fs::path(c.out_dir) / name, text);
  o.artifacts.push_back(name);
}

SolveReport solve_with_margin(const GridMeasure& first, const Box& domain, const PointPattern& pattern,
                              const CostScale& scale, int m, double margin, double* used) {
  double w = margin;
  GridMeasure grid = first;
  for (int attempt = 0;; ++attempt) {
    SolveReport rep = solve_semicoupling(grid, pattern, scale);
    *used = w;
    if (!touches_window_boundary(rep.plan) || attempt >= 4) return rep;
    w *= 2.0;
    grid = GridMeasure(domain.enlarged(w), m);
  }
}

void plan_checks(Outcome& o, const RunConfig& c, const TransportPlan& plan, int sub_boxes) {
  const int cycles = get<int>(c.params, "cycles");
  const int chains = get<int>(c.params, "chains");
  const int max_len = get<int>(c.params, "max_len");
  o.checks.push_back(check_volumes(plan));
  o.checks.push_back(check_indicator_marginal(plan));
  o.checks.push_back(check_cyclical_monotonicity(plan, cycles, max_len, c.seed));
  o.checks.push_back(check_sequential_monotonicity(plan, chains, max_len, c.seed));
  if (sub_boxes > 0) o.checks.push_back(check_efficiency(plan, random_sub_boxes(plan.pattern.domain(), sub_boxes, c.seed)));
}

SvgStyle style_of(const RunConfig& c) {
  SvgStyle s;
  s.width = get<int>(c.params, "svg_width");
  return s;
}

void cmd_solve(Outcome& o, const RunConfig& c) {
  const PointPattern pattern = config_pattern(c);
  const int m = c.m > 0 ? c.m : solve_resolution(c.d);
  Json plans = Json::array();
  for (const auto& scale : c.scales) {
    const GridMeasure grid(pattern.domain().enlarged(c.margin), m);
    double used = c.margin;
    const SolveReport rep = solve_with_margin(grid, pattern.domain(), pattern, scale, m, c.margin, &used);
    const std::string stem = c.scales.size() == 1 ? "plan" : "plan_" + sanitize(scale.id());
    emit(o, c, stem + ".json", dump(plan_to_json(rep.plan)));
    if (c.d == 2) emit(o, c, stem + ".svg", render_svg(rep.plan, style_of(c)));
    plan_checks(o, c, rep.plan, get<int>(c.params, "sub_boxes"));
    plans.push_back({{"scale", scale.id()},
                     {"total_cost", rep.plan.total_cost},
                     {"used_cells", rep.plan.used_cells()},
                     {"margin", used},
                     {"touches_window", touches_window_boundary(rep.plan)},
                     {"certificate_verified", rep.certificate.verified},
                     {"iterations", rep.iterations}});
  }
  o.report["plans"] = plans;
}

void cmd_laguerre(Outcome& o, const RunConfig& c) {
  const PointPattern pattern = config_pattern(c);
  const LaguerreDiagram diagram = solve_laguerre(pattern, c.scales.front());
  emit(o, c, "diagram.json", dump(diagram_to_json(diagram)));
  emit(o, c, "diagram.svg", render_svg(diagram, style_of(c)));
  o.checks.push_back(check_volumes(diagram));
  o.checks.push_back(check_convexity(diagram));
  o.checks.push_back(check_cyclical_monotonicity(diagram, get<int>(c.params, "cycles"), get<int>(c.params, "max_len"), c.seed));
  o.report["diagram"] = {{"cost", diagram.cost}, {"iterations", diagram.iterations}, {"residual", diagram.residual}};
}

ExperimentOptions experiment_options(const RunConfig& c) {
  ExperimentOptions opt;
  opt.m = c.m;
  opt.margin = c.margin;
  opt.threads = c.threads;
  return opt;
}

void cmd_estimate(Outcome& o, const RunConfig& c) {
  const std::string q = get<std::string>(c.params, "quantity");
  std::vector<EstimateRecord> records;
  std::vector<CostEstimate> cn, chat;
  for (const auto& scale : c.scales) {
    cn.clear();
    chat.clear();
    for (int n : c.generations) {
      if (q == "c_n" || q == "both") {
        records.push_back(estimate_cn(n, c.d, scale, c.beta, c.replicas, c.seed, experiment_options(c)));
        cn.push_back({n, records.back().mean, records.back().stderr_});
      }
      if (q == "c_hat_n" || q == "both") {
        records.push_back(estimate_chat_n(n, c.d, scale, c.replicas, c.seed, experiment_options(c)));
        chat.push_back({n, records.back().mean, records.back().stderr_});
      }
    }
    if (cn.size() >= 2) o.checks.push_back(check_monotone_costs(cn));
  }
  emit(o, c, "estimates.csv", estimates_csv(records));
  Json list = Json::array();
  for (const auto& r : records) list.push_back(estimate_to_json(r));
  o.report["estimates"] = list;
}

void cmd_stabilize(Outcome& o, const RunConfig& c) {
  IntVector z(c.d);
  for (int a = 0; a < c.d; ++a) z[a] = c.z[static_cast<std::size_t>(a)];
  const Box probe = c.params["probe"].is_null() ? Box::cube(z.cast<double>(), 1.0) : box_from_json(c.params["probe"]);
  const int max_n = *std::max_element(c.generations.begin(), c.generations.end());
  const StabilizationRecord rec = stabilization_study(z, c.seed, max_n, c.d, c.scales.front(), c.beta, probe,
                                                      c.replicas, experiment_options(c));
  emit(o, c, "stabilization.json", dump(stabilization_to_json(rec)));
  CheckReport trend;
  trend.check_name = "stabilization_trend";
  trend.samples_tested = rec.replicas;
  trend.worst_violation = rec.changed_fraction.back() - rec.changed_fraction.front();
  trend.passed = trend.worst_violation <= 0.0;
  trend.details = "last pair minus first pair of mean changed fractions";
  o.checks.push_back(trend);
  o.report["stabilization"] = stabilization_to_json(rec);
}

void cmd_check(Outcome& o, const RunConfig& c) {
  const Json doc = read_json(get<std::string>(c.params, "input"));
  if (doc.value("schema", "") == "semicouple.diagram") {
    const LaguerreDiagram diagram = diagram_from_json(doc);
    o.checks.push_back(check_volumes(diagram));
    o.checks.push_back(check_convexity(diagram));
    o.checks.push_back(check_cyclical_monotonicity(diagram, get<int>(c.params, "cycles"), get<int>(c.params, "max_len"), c.seed));
    return;
  }
  const TransportPlan plan = plan_from_json(doc);
  plan_checks(o, c, plan, get<int>(c.params, "sub_boxes"));
}

void cmd_bounds(Outcome& o, const RunConfig& c) {
  const CostScale& s = c.scales.front();
  const int from = c.params["d_from"].is_null() ? c.d : get<int>(c.params, "d_from");
  const int to = c.params["d_to"].is_null() ? std::max(from, c.d) : get<int>(c.params, "d_to");
  const BoundsReport rep = bounds_sweep(from, to, s.exponent());
  emit(o, c, "bounds.json", dump(bounds_to_json(rep)));
  CheckReport chk;
  chk.check_name = "bounds";
  chk.passed = rep.passed;
  chk.skipped = rep.skipped;
  chk.samples_tested = static_cast<std::int64_t>(rep.entries.size());
  chk.worst_violation = 0.0;
  for (const auto& e : rep.entries) chk.worst_violation = std::max(chk.worst_violation, e.lower - e.upper);
  chk.details = rep.note;
  o.checks.push_back(chk);
  o.report["bounds"] = bounds_to_json(rep);
}

void cmd_render(Outcome& o, const RunConfig& c) {
  const Json doc = read_json(get<std::string>(c.params, "input"));
  const std::string out = get<std::string>(c.params, "output");
  if (doc.value("schema", "") == "semicouple.diagram") {
    emit(o, c, out, render_svg(diagram_from_json(doc), style_of(c)));
  } else {
    emit(o, c, out, render_svg(plan_from_json(doc), style_of(c)));
  }
}

Json base_report(const std::string& command) {
  return {{"schema", "semicouple.run_report"}, {"schema_version", kReportSchemaVersion}, {"command", command}};
}

}  // namespace

Json default_config() {
  return {
      {"command", "solve"},
      {"scale", {{"kind", "power"}, {"p", 2.0}}},  // or a list of scales
      {"d", 2},
      {"beta", 1.0},
      {"n", 0},              // generation, or a list of generations for estimate
      {"z", nullptr},        // basepoint for stabilize; zeros by default
      {"m", 0},              // cells per unit length; 0 means 512/64/16 for solve, 256/32/8 for estimates, 16 for stabilize
      {"margin", 2.0},       // Lebesgue window margin in length units
      {"replicas", 30},
      {"seed", 1},
      {"threads", 0},        // 0 means hardware concurrency
      {"out_dir", "."},
      {"points", nullptr},   // explicit target coordinates
      {"num_points", 25},    // uniform targets when no points are given
      {"domain", nullptr},   // {"lower":[..],"extent":[..]}; default cube of side ceil(N^{1/d})
      {"multiplicity", 1},   // per-target mass multiplicity / denominator
      {"denominator", 1},
      {"quantity", "c_n"},   // c_n, c_hat_n or both
      {"probe", nullptr},    // stabilize probe box; default unit cube at z
      {"cycles", 10000},
      {"chains", 10000},
      {"max_len", 4},
      {"sub_boxes", 0},      // efficiency boxes; solve default 0, check default 5
      {"d_from", nullptr},
      {"d_to", nullptr},
      {"input", ""},         // plan or diagram JSON for check and render
      {"output", "render.svg"},
      {"svg_width", 640},
  };
}

RunConfig parse_config(const Json& document) {
  if (!document.is_object()) throw ArgumentError("config must be a JSON object");
  Json merged = default_config();
  for (const auto& [key, value] : document.items()) {
    if (!merged.contains(key)) throw ArgumentError("unknown config key \"" + key + "\"");
    merged[key] = value;
  }
  if (merged["command"] == "check" && !document.contains("sub_boxes")) merged["sub_boxes"] = 5;

  RunConfig c;
  c.params = merged;
  c.command = get<std::string>(merged, "command");
  if (!kCommands.count(c.command)) throw ArgumentError("unknown command \"" + c.command + "\"");
  c.d = get<int>(merged, "d");
  c.beta = get<double>(merged, "beta");
  c.m = get<int>(merged, "m");
  c.margin = get<double>(merged, "margin");
  c.replicas = get<int>(merged, "replicas");
  c.seed = get<std::uint64_t>(merged, "seed");
  c.threads = get<int>(merged, "threads");
  c.out_dir = get<std::string>(merged, "out_dir");
  if (c.d < 1 || c.d > 3) throw ArgumentError("d must be 1, 2 or 3");
  if (!(c.beta >= 0.0)) throw ArgumentError("beta must be nonnegative");
  if (c.m < 0) throw ArgumentError("m must be nonnegative");
  if (!(c.margin > 0.0)) throw ArgumentError("margin must be positive");
  if (c.threads < 0) throw ArgumentError("threads must be nonnegative");

  const Json& sc = merged["scale"];
  if (sc.is_array()) {
    for (const auto& s : sc) c.scales.push_back(scale_from_json(s));
  } else {
    c.scales.push_back(scale_from_json(sc));
  }
  if (c.scales.empty()) throw ArgumentError("at least one scale is required");

  const Json& n = merged["n"];
  if (n.is_array()) {
    c.generations = n.get<std::vector<int>>();
  } else {
    c.generations.push_back(get<int>(merged, "n"));
  }
  if (c.generations.empty()) throw ArgumentError("at least one generation is required");
  for (int g : c.generations) {
    if (g < 0) throw ArgumentError("generations must be nonnegative");
  }
  c.z = merged["z"].is_null() ? std::vector<int>(static_cast<std::size_t>(c.d), 0) : merged["z"].get<std::vector<int>>();
  if (c.z.size() != static_cast<std::size_t>(c.d)) throw ArgumentError("z needs d coordinates");
  if (get<int>(merged, "cycles") < 0 || get<int>(merged, "chains") < 0) throw ArgumentError("sample counts must be nonnegative");
  if (get<int>(merged, "max_len") < 2) throw ArgumentError("max_len must be at least 2");
  if (get<int>(merged, "svg_width") < 1) throw ArgumentError("svg_width must be positive");

  const int max_n = c.d == 1 ? 6 : c.d == 2 ? 3 : 1;
  if (c.command == "solve" || c.command == "laguerre") {
    config_pattern(c);  // validates points, domain and masses
  }
  if (c.command == "laguerre") {
    if (c.d != 2) throw ArgumentError("laguerre needs d = 2");
    if (!c.scales.front().is_power(2.0)) throw ArgumentError("laguerre needs the quadratic scale");
  }
  if (c.command == "estimate") {
    if (c.replicas < 30) throw ArgumentError("estimate needs replicas >= 30");
    const std::string q = get<std::string>(merged, "quantity");
    if (q != "c_n" && q != "c_hat_n" && q != "both") throw ArgumentError("quantity must be c_n, c_hat_n or both");
    for (int g : c.generations) {
      if (g > max_n) throw ArgumentError("generation exceeds the grid limit for this d");
    }
  }
  if (c.command == "stabilize") {
    if (c.replicas < 1) throw ArgumentError("stabilize needs replicas >= 1");
    const int top = *std::max_element(c.generations.begin(), c.generations.end());
    if (top < 1 || top > max_n) throw ArgumentError("stabilize needs 1 <= n <= the grid limit for this d");
    if (!merged["probe"].is_null() && box_from_json(merged["probe"]).dim() != c.d) {
      throw ArgumentError("probe dimension differs from d");
    }
  }
  if (c.command == "bounds") {
    if (c.scales.front().kind() != CostScale::Kind::Power) throw ArgumentError("bounds need a power scale");
  }
  if (c.command == "check" || c.command == "render") {
    if (get<std::string>(merged, "input").empty()) throw ArgumentError(c.command + " needs an input file");
  }
  return c;
}

RunResult run(const RunConfig& config) {
  fs::create_directories(config.out_dir);
  Outcome o;
  if (config.command == "solve") cmd_solve(o, config);
  else if (config.command == "laguerre") cmd_laguerre(o, config);
  else if (config.command == "estimate") cmd_estimate(o, config);
  else if (config.command == "stabilize") cmd_stabilize(o, config);
  else if (config.command == "check") cmd_check(o, config);
  else if (config.command == "bounds") cmd_bounds(o, config);
  else if (config.command == "render") cmd_render(o, config);

  RunResult result;
  result.report = base_report(config.command);
  for (const auto& [k, v] : o.report.items()) result.report[k] = v;
  Json checks = Json::array();
  bool ok = true;
  for (const auto& chk : o.checks) {
    checks.push_back(check_to_json(chk));
    ok = ok && chk.passed;
  }
  result.report["checks"] = checks;
  result.report["config"] = config.params;
  result.report["status"] = ok ? "ok" : "check_failed";
  result.exit_code = ok ? 0 : 1;
  o.artifacts.push_back("report.json");
  result.report["artifacts"] = o.artifacts;
  result.artifacts = o.artifacts;
  write_file(fs::path(config.out_dir) / "report.json", dump(result.report));
  return result;
}

RunResult run_document(const Json& document) {
  RunResult result;
  std::string out_dir = ".";
  std::string command = "unknown";
  if (document.is_object()) {
    if (document.contains("out_dir") && document["out_dir"].is_string()) out_dir = document["out_dir"];
    if (document.contains("command") && document["command"].is_string()) command = document["command"];
  }
  try {
    return run(parse_config(document));
  } catch (const ArgumentError& e) {
    result.exit_code = 2;
    result.report = base_report(command);
    result.report["status"] = "config_error";
    result.report["error"] = e.what();
  } catch (const Json::exception& e) {
    result.exit_code = 2;
    result.report = base_report(command);
    result.report["status"] = "config_error";
    result.report["error"] = e.what();
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.report = base_report(command);
    result.report["status"] = "error";
    result.report["error"] = e.what();
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (!ec) {
    std::ofstream out(fs::path(out_dir) / "report.json", std::ios::binary);
    if (out) {
      out << dump(result.report);
      result.artifacts.push_back("report.json");
    }
  }
  return result;
}

}  // namespace semicouple
