#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "semicouple/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"semicouple: optimal semicouplings of Lebesgue measure and point patterns"};
  std::string positional, command, config_path, out_dir;
  std::uint64_t seed = 0;
  int replicas = 0;
  app.add_option("subcommand", positional, "solve, laguerre, estimate, stabilize, check, bounds or render");
  app.add_option("--command", command, "command to run (overrides the config)");
  app.add_option("--config", config_path, "JSON config file");
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  auto* rep_opt = app.add_option("--replicas", replicas, "Monte Carlo replicas");
  app.add_option("--out-dir", out_dir, "directory for artifacts");
  CLI11_PARSE(app, argc, argv);

  semicouple::Json doc = semicouple::Json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    try {
      if (!in) throw std::runtime_error("cannot read " + config_path);
      doc = semicouple::Json::parse(in);
    } catch (const std::exception& e) {
      std::cerr << semicouple::dump({{"status", "config_error"}, {"error", e.what()}});
      return 2;
    }
  }
  if (doc.is_object()) {
    if (!positional.empty()) doc["command"] = positional;
    if (!command.empty()) doc["command"] = command;
    if (*seed_opt) doc["seed"] = seed;
    if (*rep_opt) doc["replicas"] = replicas;
    if (!out_dir.empty()) doc["out_dir"] = out_dir;
  }
  const semicouple::RunResult result = semicouple::run_document(doc);
  if (result.exit_code == 2 || result.report.value("status", "") == "error") {
    std::cerr << semicouple::dump(result.report);
  } else {
    std::cout << semicouple::dump({{"status", result.report.value("status", "")}, {"artifacts", result.artifacts}});
  }
  return result.exit_code;
}
