#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levydrift/csvio.hpp"
#include "levydrift/mc.hpp"
#include "levydrift/stats.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using namespace levydrift;
using cli::RunConfig;

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::runtime_error(msg);
}

void ensure_out_dir(const std::string& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

// ---------------------------------------------------------------------------

int cmd_simulate(const RunConfig& cfg) {
  require(cfg.has_model, "simulate: config needs a [model] section");
  require(cfg.has_noise, "simulate: config needs a [noise] section");
  require(cfg.has_simulate, "simulate: config needs a [simulate] section");
  Rng rng(cfg.sim_seed);
  SimulateOptions opt;
  opt.refinement = cfg.refinement;
  opt.jump_log = cfg.jump_log;
  const SamplePath path = simulate(cfg.model, cfg.theta0, cfg.x0, cfg.eps, cfg.n,
                                   cfg.noise, cfg.tau, rng, opt);
  ensure_out_dir(cfg.out_dir);
  const std::string path_file = join_path(cfg.out_dir, "path.csv");
  write_file(path_file, path_to_csv(path));
  std::cout << "wrote " << path_file << " (" << path.times.size() << " rows)\n";
  if (cfg.jump_log) {
    const std::string jumps_file = join_path(cfg.out_dir, "jumps.csv");
    write_file(jumps_file, jumps_to_csv(path));
    std::cout << "wrote " << jumps_file << "\n";
  }
  return 0;
}

SamplePath path_from_files(const RunConfig& cfg, const std::string& data_path,
                           const std::string& jumps_path) {
  const LoadedPath loaded = path_from_csv(read_file(data_path));
  require(loaded.d == cfg.model.d,
          "estimate: CSV dimension does not match the configured model");
  SamplePath path;
  path.times = loaded.times;
  path.states = loaded.states;
  path.d = loaded.d;
  path.epsilon = cfg.eps;
  path.model_id = cfg.model.id;
  path.theta0 = cfg.theta0;
  path.tau = cfg.tau;
  if (!jumps_path.empty()) {
    path.has_jump_log = true;
    path.jumps = jumps_from_csv(read_file(jumps_path), path.d,
                                path.n_intervals());
  }
  return path;
}

int cmd_estimate(const RunConfig& cfg, const std::string& data_path,
                 const std::string& jumps_path) {
  require(cfg.has_model, "estimate: config needs a [model] section");
  require(cfg.has_estimate, "estimate: config needs an [estimate] section");
  require(cfg.has_simulate,
          "estimate: config needs a [simulate] section (for eps)");
  require(!data_path.empty(), "estimate: --data <csv> is required");
  const SamplePath path = path_from_files(cfg, data_path, jumps_path);
  EstimationResult result =
      cfg.closed_form
          ? estimate_example2d_closed_form(path, cfg.model, cfg.rule, cfg.optimizer)
          : estimate(path, cfg.model, cfg.rule, cfg.optimizer);
  if (cfg.rule.ideal && cfg.has_noise) {
    apply_sigma_normalization(result, cfg.noise, cfg.eps, cfg.theta0);
  }
  const std::string record = result_to_json(result);
  std::cout << record << "\n";
  ensure_out_dir(cfg.out_dir);
  write_file(join_path(cfg.out_dir, "estimate.json"), record + "\n");
  write_file(join_path(cfg.out_dir, "estimate.csv"), result_to_csv(result));
  return 0;
}

int cmd_mc(const RunConfig& cfg, int threads, const std::string& config_text) {
  require(cfg.has_model, "mc: config needs a [model] section");
  require(cfg.has_noise, "mc: config needs a [noise] section");
  require(cfg.has_mc, "mc: config needs an [mc] section");
  MCConfig mc;
  mc.model = cfg.model;
  mc.theta0 = cfg.theta0;
  mc.x0 = cfg.x0;
  mc.noise = cfg.noise;
  mc.cells = cfg.cells;
  mc.rules = cfg.mc_rules;
  mc.replications = cfg.reps;
  mc.seed = cfg.mc_seed;
  mc.refinement = cfg.refinement;
  mc.tau = cfg.tau;
  mc.estimator = cfg.closed_form ? MCConfig::Estimator::ClosedForm
                                 : MCConfig::Estimator::Generic;
  mc.gamma = cfg.gamma;
  mc.rho = cfg.rho;
  mc.optimizer = cfg.optimizer;
  mc.validate();

  const MCReport report = run_mc(mc, threads);
  ensure_out_dir(cfg.out_dir);
  write_file(join_path(cfg.out_dir, "config.json"), config_text);
  if (cfg.fmt_csv) {
    write_file(join_path(cfg.out_dir, "report.csv"), report.to_csv());
    write_file(join_path(cfg.out_dir, "qq.csv"), report.qq_csv());
  }
  if (cfg.fmt_md) {
    write_file(join_path(cfg.out_dir, "tables.md"), report.tables_markdown());
  }
  long invalid = 0;
  for (const auto& e : report.entries) invalid += e.invalid ? 1 : 0;
  std::cout << "mc: " << report.entries.size() << " (cell,rule) entries, "
            << invalid << " invalid; outputs in " << cfg.out_dir << "\n";
  return invalid == 0 ? 0 : 1;
}

int cmd_diagnose(const RunConfig& cfg, const std::vector<double>& q_list,
                 double xmin, double xmax, int xpoints) {
  require(cfg.has_noise, "diagnose: config needs a [noise] section");
  std::ostringstream os;
  os << "# levydrift noise diagnostics\n";
  for (const auto& pc : cfg.noise.components) {
    os << "component coord=" << pc.coord + 1 << ": "
       << component_label(pc.component) << "\n";
  }

  std::vector<double> x_grid(xpoints);
  for (int i = 0; i < xpoints; ++i) {
    x_grid[i] = xmax * std::pow(xmin / xmax, static_cast<double>(i) /
                                                  (xpoints - 1));
  }
  std::vector<double> beta_grid(24);
  for (int i = 0; i < 24; ++i) {
    beta_grid[i] = 1e-2 * std::pow(1e-2, static_cast<double>(i) / 23.0);
  }

  for (int c = 0; c < cfg.noise.dim; ++c) {
    const LevySpec sub = cli::coordinate_spec(cfg.noise, c);
    os << "\n## coordinate " << (c + 1) << "\n";
    os << "x, h(x), lambda(x), sigma2(x)\n";
    for (double x : x_grid) {
      os << x << ", " << pruitt_h(sub, x) << ", " << tail_mass(sub, x)[0] << ", "
         << truncated_variance(sub, x)[0] << "\n";
    }
    const ActivityIndex ai = estimate_activity_index(sub, beta_grid);
    os << "activity index beta_hat = " << ai.beta_hat
       << (ai.degenerate ? " (degenerate: h == 0 on the grid)" : "") << "\n";
    for (double q : q_list) {
      const Q2Check chk = check_q2(sub, q);
      os << "Q2[q=" << q << "]: " << (chk.finite ? "finite" : "infinite");
      if (chk.finite) os << " (integral " << chk.value << ")";
      os << "\n";
    }
  }

  for (const auto& pc : cfg.noise.components) {
    if (const auto* st = std::get_if<Stable>(&pc.component)) {
      if (st->alpha > 1.0 && st->alpha < 2.0) {
        os << "\nstable alpha=" << st->alpha
           << ": admissible eps-rate window for eps = O(n^-beta): ("
           << 1.0 - 1.0 / st->alpha << ", " << 1.5 - 1.0 / st->alpha << ")\n";
      }
    }
  }

  if (cfg.has_simulate && cfg.has_estimate) {
    const RegimeDiagnostics d = regime_diagnostics(cfg.n, cfg.eps, cfg.rule,
                                                   cfg.noise, cfg.gamma, cfg.rho);
    os << "\n## regime diagnostics (n=" << cfg.n << ", eps=" << cfg.eps
       << ", rule=" << cfg.rule.label() << ", gamma=" << cfg.gamma
       << ", rho=" << cfg.rho << ")\n";
    os << "delta = " << d.delta << "\n";
    os << "n*delta = " << d.n_delta << "\n";
    os << "delta*eps^-1*n^1/4 = " << d.diag_n14 << "\n";
    os << "delta/Delta_n = " << d.delta_over_dn << "\n";
    os << "eps*Delta_n^gamma/delta = " << d.eps_dngamma_over_delta << "\n";
    os << "delta/eps = " << d.delta_over_eps << "\n";
    os << "lambda(delta/eps)/(n log n) = " << d.lambda_over_nlogn << "\n";
    os << "n*eps*Delta_n^gamma = " << d.n_eps_dngamma << "\n";
    os << "sigma^rho(delta/eps)*log n = " << d.sigma_rho_logn << "\n";
    os << "n*eps*sigma(delta/eps) = " << d.n_eps_sigma << "\n";
    os << "(delta/eps)^-1*sigma(delta/eps) = " << d.ar_ratio << "\n";
  }

  std::cout << os.str();
  ensure_out_dir(cfg.out_dir);
  write_file(join_path(cfg.out_dir, "diagnose.txt"), os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "levydrift: simulation and drift estimation for SDEs with small Levy "
      "noise (threshold/filtered least squares, jump-observed filters, "
      "Levy-measure diagnostics, Monte Carlo tables)"};
  app.require_subcommand(1);

  std::string config_path, out_override, rule_override, data_path, jumps_path;
  std::uint64_t seed_override = 0;
  int threads = 1;
  std::vector<double> q_list = {0.5, 1.0, 1.5, 2.0};
  double xmin = 1e-3, xmax = 1e-1;
  int xpoints = 20;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_override, "output directory (overrides config)");
    return sub->add_option("--seed", seed_override,
                           "seed override (simulate/mc sections)");
  };

  CLI::App* sim = app.add_subcommand("simulate", "simulate one sample path");
  CLI::Option* sim_seed = add_common(sim);

  CLI::App* est = app.add_subcommand("estimate", "estimate theta from a path CSV");
  add_common(est);
  est->add_option("--data", data_path, "path CSV (t,X_1..X_d)")
      ->required()
      ->check(CLI::ExistingFile);
  est->add_option("--jumps", jumps_path,
                  "jump-log CSV for the ideal filter (interval_index,jump_time,size_*)")
      ->check(CLI::ExistingFile);
  CLI::Option* est_rule =
      est->add_option("--rule", rule_override,
                      "threshold rule: none|const:c|power:c,re,rn|fixed:v|ideal:c");

  CLI::App* mc = app.add_subcommand("mc", "run the Monte Carlo study");
  CLI::Option* mc_seed = add_common(mc);
  mc->add_option("--threads", threads, "worker threads (default 1)")
      ->check(CLI::PositiveNumber);

  CLI::App* diag = app.add_subcommand("diagnose",
                                      "Levy-measure analytics and regime diagnostics");
  add_common(diag);
  diag->add_option("--q", q_list, "moment orders for the Q2[q] check");
  diag->add_option("--xmin", xmin, "smallest h(x) grid point");
  diag->add_option("--xmax", xmax, "largest h(x) grid point");
  diag->add_option("--xpoints", xpoints, "h(x) grid size")
      ->check(CLI::Range(4, 1000));

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = cli::load_config_file(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (sim->parsed()) {
      if (*sim_seed) cfg.sim_seed = seed_override;
      return cmd_simulate(cfg);
    }
    if (est->parsed()) {
      if (*est_rule) cfg.rule = ThresholdRule::parse(rule_override);
      return cmd_estimate(cfg, data_path, jumps_path);
    }
    if (mc->parsed()) {
      if (*mc_seed) cfg.mc_seed = seed_override;
      return cmd_mc(cfg, threads, read_file(config_path));
    }
    if (diag->parsed()) {
      return cmd_diagnose(cfg, q_list, xmin, xmax, xpoints);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
