#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "levydrift/estimate.hpp"
#include "levydrift/levy.hpp"
#include "levydrift/mc.hpp"
#include "levydrift/model.hpp"

namespace levydrift::cli {

/// Parsed run configuration. Sections are optional; each subcommand validates
/// that the sections it needs are present. Unknown keys are rejected.
struct RunConfig {
  bool has_model = false;
  ModelSpec model;
  std::vector<double> theta0;
  std::vector<double> x0;

  bool has_noise = false;
  LevySpec noise;

  bool has_simulate = false;
  int n = 1000;
  double eps = 0.1;
  int refinement = 10;
  double tau = 0.0;
  std::uint64_t sim_seed = 1;
  bool jump_log = false;

  bool has_estimate = false;
  ThresholdRule rule;
  OptimizerSettings optimizer;
  bool closed_form = false;

  bool has_mc = false;
  std::vector<MCCell> cells;
  std::vector<ThresholdRule> mc_rules;
  int reps = 2000;
  std::uint64_t mc_seed = 1;
  double gamma = 0.5;
  double rho = 0.5;

  std::string out_dir = "out";
  bool fmt_csv = true;
  bool fmt_md = true;
};

RunConfig load_config_text(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

/// One-dimensional restriction of a multivariate noise spec to coordinate c.
LevySpec coordinate_spec(const LevySpec& spec, int coord);

}  // namespace levydrift::cli
