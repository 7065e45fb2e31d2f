#pragma once

#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "perihyp/grid.hpp"
#include "perihyp/presets.hpp"
#include "perihyp/problem.hpp"

namespace perihyp {

struct LambdaRange {
  double min = 0.0;
  double max = 0.0;
  int steps = 1;
};

struct RunConfig {
  std::string command;
  nlohmann::ordered_json problem;
  int nt = 128;
  int nx = 128;
  double lambda = 0.0;
  std::optional<LambdaRange> lambda_range;
  double tol = 1e-8;
  int max_iter = 50;
  int probe_order = 2;
  bool continue_past_failures = false;
  std::vector<std::string> seed;  // optional per-component expressions over (t, x, lambda)
  std::string out_dir = ".";

  PeriodicGrid grid() const { return PeriodicGrid(nt, nx); }
  /// Canonical serialized form (used for hashing and for echoing into reports).
  nlohmann::ordered_json canonical() const;
  std::string hash() const;
};

/// Parse and validate a JSON config file. Unknown keys are rejected; grid and
/// range constraints are enforced here. Throws ConfigError.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const nlohmann::ordered_json& j);

/// A problem materialized from the config: either a transport system (first
/// order, or the reduction of a wave problem for solver-facing commands) or a
/// plain wave problem for wave-specific commands.
struct BuiltProblem {
  std::string name;
  std::shared_ptr<const TransportProblem> transport;
  std::shared_ptr<const WaveProblem> wave;
  const Preset* preset = nullptr;  // set when the problem came from the catalog
  bool is_wave() const { return wave != nullptr; }
};

BuiltProblem build_problem(const nlohmann::ordered_json& spec);

}  // namespace perihyp
