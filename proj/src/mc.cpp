#include "levydrift/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <thread>

#include "levydrift/stats.hpp"

namespace levydrift {

void MCConfig::validate() const {
  model.validate();
  noise.validate();
  if (noise.dim != model.d) {
    throw std::invalid_argument("mc: noise dim must match model dim");
  }
  if (static_cast<int>(theta0.size()) != model.p ||
      static_cast<int>(x0.size()) != model.d) {
    throw std::invalid_argument("mc: theta0 / x0 sizes must match the model");
  }
  if (!model.in_box(theta0)) {
    throw std::invalid_argument("mc: theta0 must lie in the parameter box");
  }
  if (replications < 2) {
    throw std::invalid_argument("mc: replications must be >= 2");
  }
  if (cells.empty() || rules.empty()) {
    throw std::invalid_argument("mc: need at least one cell and one rule");
  }
  for (const auto& cell : cells) {
    if (cell.n < 1 || !(cell.eps > 0.0)) {
      throw std::invalid_argument("mc: every cell needs n >= 1 and eps > 0");
    }
    for (const auto& rule : rules) {
      const double delta = rule.delta(cell.n, cell.eps);
      if (!(delta > 0.0)) {
        throw std::invalid_argument("mc: rule " + rule.label() +
                                    " yields a non-positive threshold");
      }
    }
  }
  if (refinement < 1) throw std::invalid_argument("mc: refinement must be >= 1");
  if (estimator == Estimator::ClosedForm && model.id != "example2d") {
    throw std::invalid_argument("mc: closed-form estimator requires example2d");
  }
}

NormalityStats normality_stats(const std::vector<double>& errors) {
  NormalityStats s;
  s.skewness = skewness(errors);
  s.excess_kurtosis = excess_kurtosis(errors);
  const double sd = sample_sd(errors);
  s.ks_distance =
      sd > 0.0 ? ks_distance_normal(errors, sample_mean(errors), sd) : 1.0;
  return s;
}

std::vector<std::pair<double, double>> qq_data(const std::vector<double>& errors) {
  return qq_pairs(errors);
}

namespace {

struct RepOutcome {
  bool ok = false;
  std::vector<double> theta_hat;
  double retained_fraction = 0.0;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

MCReport run_mc(const MCConfig& config, int threads) {
  config.validate();
  if (threads < 1) threads = 1;
  const int M = config.replications;
  const int n_rules = static_cast<int>(config.rules.size());
  bool need_jump_log = false;
  for (const auto& r : config.rules) need_jump_log |= r.ideal;

  MCReport report;
  report.model_id = config.model.id;
  report.p = config.model.p;
  report.theta0 = config.theta0;

  for (std::size_t cell_idx = 0; cell_idx < config.cells.size(); ++cell_idx) {
    const MCCell cell = config.cells[cell_idx];
    std::vector<RepOutcome> outcomes(static_cast<std::size_t>(M) * n_rules);

    std::atomic<int> next{0};
    auto worker = [&]() {
      SimulateOptions opt;
      opt.refinement = config.refinement;
      opt.jump_log = need_jump_log;
      for (;;) {
        const int rep = next.fetch_add(1);
        if (rep >= M) break;
        Rng rng(substream_seed(config.seed, cell_idx, rep));
        SamplePath path;
        bool sim_ok = true;
        try {
          path = simulate(config.model, config.theta0, config.x0, cell.eps,
                          cell.n, config.noise, config.tau, rng, opt);
        } catch (const std::exception&) {
          sim_ok = false;
        }
        for (int ri = 0; ri < n_rules; ++ri) {
          RepOutcome& out = outcomes[static_cast<std::size_t>(rep) * n_rules + ri];
          if (!sim_ok) continue;
          try {
            EstimationResult res =
                config.estimator == MCConfig::Estimator::ClosedForm
                    ? estimate_example2d_closed_form(path, config.model,
                                                     config.rules[ri],
                                                     config.optimizer)
                    : estimate(path, config.model, config.rules[ri],
                               config.optimizer);
            if (res.status == OptStatus::MaxIter) continue;
            out.ok = true;
            out.theta_hat = std::move(res.theta_hat);
            out.retained_fraction = res.retained_fraction;
          } catch (const std::exception&) {
            // counted as a failure below
          }
        }
      }
    };
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(threads);
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }

    // Deterministic aggregation in replication order.
    for (int ri = 0; ri < n_rules; ++ri) {
      CellRuleStats stats;
      stats.cell_index = static_cast<int>(cell_idx);
      stats.rule_index = ri;
      stats.n = cell.n;
      stats.eps = cell.eps;
      stats.rule_label = config.rules[ri].label();
      stats.norm_errors.assign(config.model.p, {});
      std::vector<std::vector<double>> thetas(config.model.p);
      double rf = 0.0;
      for (int rep = 0; rep < M; ++rep) {
        const RepOutcome& out =
            outcomes[static_cast<std::size_t>(rep) * n_rules + ri];
        if (!out.ok) {
          ++stats.failures;
          continue;
        }
        ++stats.count;
        rf += out.retained_fraction;
        for (int i = 0; i < config.model.p; ++i) {
          thetas[i].push_back(out.theta_hat[i]);
          stats.norm_errors[i].push_back(
              (out.theta_hat[i] - config.theta0[i]) / cell.eps);
        }
      }
      if (stats.count > 0) rf /= static_cast<double>(stats.count);
      stats.retained_fraction_mean = rf;
      stats.diagnostics = regime_diagnostics(cell.n, cell.eps, config.rules[ri],
                                             config.noise, config.gamma,
                                             config.rho);
      if (stats.failures > M / 2) {
        stats.invalid = true;
        std::ostringstream os;
        os << "more than half of the replications failed (" << stats.failures
           << "/" << M << ")";
        stats.invalid_reason = os.str();
      } else {
        stats.params.resize(config.model.p);
        for (int i = 0; i < config.model.p; ++i) {
          ParamStats& ps = stats.params[i];
          ps.mean = sample_mean(thetas[i]);
          ps.sd = sample_sd(thetas[i]);
          ps.se = ps.sd / std::sqrt(static_cast<double>(stats.count));
          ps.min = sample_min(thetas[i]);
          ps.max = sample_max(thetas[i]);
          ps.median = sample_median(thetas[i]);
          const NormalityStats ns = normality_stats(stats.norm_errors[i]);
          ps.skewness = ns.skewness;
          ps.excess_kurtosis = ns.excess_kurtosis;
          ps.ks = ns.ks_distance;
        }
      }
      report.entries.push_back(std::move(stats));
    }
  }
  return report;
}

std::string MCReport::to_csv() const {
  std::ostringstream os;
  os << "model,n,eps,rule,param,mean,sd,se,skew,exkurt,ks,n_delta,diag_n14,"
        "retained_frac,failures\n";
  for (const auto& e : entries) {
    for (int i = 0; i < p; ++i) {
      os << model_id << "," << e.n << "," << fmt(e.eps) << "," << e.rule_label
         << "," << (i + 1) << ",";
      if (e.invalid || e.params.empty()) {
        os << "nan,nan,nan,nan,nan,nan";
      } else {
        const ParamStats& ps = e.params[i];
        os << fmt(ps.mean) << "," << fmt(ps.sd) << "," << fmt(ps.se) << ","
           << fmt(ps.skewness) << "," << fmt(ps.excess_kurtosis) << ","
           << fmt(ps.ks);
      }
      os << "," << fmt(e.diagnostics.n_delta) << "," << fmt(e.diagnostics.diag_n14)
         << "," << fmt(e.retained_fraction_mean) << "," << e.failures << "\n";
    }
  }
  return os.str();
}

std::string MCReport::qq_csv() const {
  std::ostringstream os;
  os << "cell,theoretical_q,empirical_q\n";
  for (const auto& e : entries) {
    if (e.invalid) continue;
    for (int i = 0; i < p; ++i) {
      if (e.norm_errors[i].size() < 2) continue;
      const auto pairs = qq_data(e.norm_errors[i]);
      const std::string cell_id = model_id + ":" + std::to_string(e.n) + ":" +
                                  fmt(e.eps) + ":" + e.rule_label + ":" +
                                  std::to_string(i + 1);
      for (const auto& [tq, eq] : pairs) {
        os << cell_id << "," << fmt(tq) << "," << fmt(eq) << "\n";
      }
    }
  }
  return os.str();
}

std::string MCReport::tables_markdown() const {
  // Group by rule, then epsilon; columns are the n values.
  std::ostringstream os;
  std::map<std::string, std::map<double, std::vector<const CellRuleStats*>>> grouped;
  for (const auto& e : entries) grouped[e.rule_label][e.eps].push_back(&e);
  for (auto& [rule, by_eps] : grouped) {
    os << "## rule " << rule << "\n\n";
    for (auto& [eps, cells] : by_eps) {
      std::sort(cells.begin(), cells.end(),
                [](const CellRuleStats* a, const CellRuleStats* b) {
                  return a->n < b->n;
                });
      os << "| eps=" << fmt_short(eps, 2) << " |";
      for (const auto* c : cells) os << " n=" << c->n << " |";
      os << " true |\n|---|";
      for (std::size_t i = 0; i < cells.size(); ++i) os << "---|";
      os << "---|\n";
      for (int i = 0; i < p; ++i) {
        os << "| theta_" << (i + 1) << " |";
        for (const auto* c : cells) {
          os << " "
             << (c->invalid ? std::string("invalid")
                            : fmt_short(c->params[i].mean, 5))
             << " |";
        }
        os << " " << fmt_short(theta0[i], 1) << " |\n";
        os << "| (s.d.) |";
        for (const auto* c : cells) {
          os << " "
             << (c->invalid ? std::string("-")
                            : "(" + fmt_short(c->params[i].sd, 4) + ")")
             << " |";
        }
        os << "  |\n";
      }
      if (std::isfinite(cells.front()->diagnostics.delta)) {
        os << "| (n delta, delta eps^-1 n^1/4) |";
        for (const auto* c : cells) {
          std::ostringstream pair;
          const double nd = c->diagnostics.n_delta;
          if (std::abs(nd - std::round(nd)) < 1e-9) {
            pair << "(" << static_cast<long long>(std::llround(nd)) << ","
                 << fmt_short(c->diagnostics.diag_n14, 2) << ")";
          } else {
            pair << "(" << fmt_short(nd, 2) << ","
                 << fmt_short(c->diagnostics.diag_n14, 2) << ")";
          }
          os << " " << pair.str() << " |";
        }
        os << " (inf,0) |\n";
      }
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace levydrift
