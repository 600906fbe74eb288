#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "semicouple/serialization.hpp"

namespace semicouple {

// Parsed run configuration. Every key and default is listed in
// default_config(); unknown keys are rejected.
struct RunConfig {
  std::string command;  // solve, laguerre, estimate, stabilize, check, bounds, render
  std::vector<CostScale> scales;
  int d = 2;
  double beta = 1.0;
  std::vector<int> generations;  // n, or the list of n for estimate
  std::vector<int> z;
  int m = 0;  // 0: per-command default
  double margin = 2.0;
  int replicas = 30;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_dir = ".";
  Json params;  // the full merged document, for command-specific keys
};

Json default_config();

// Merges `overrides` into the defaults and validates everything the named
// command will need. Throws ArgumentError with a readable message.
RunConfig parse_config(const Json& document);

struct RunResult {
  int exit_code = 0;  // 0 success, 1 check failure or runtime error, 2 config error
  Json report;
  std::vector<std::string> artifacts;
};

// Executes the command and writes artifacts under config.out_dir.
RunResult run(const RunConfig& config);

// parse_config + run with config errors mapped to exit code 2; the JSON
// diagnostics go to report.json in the output directory when it is writable.
RunResult run_document(const Json& document);

}  // namespace semicouple
