#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "levydrift/mc.hpp"
#include "levydrift/stats.hpp"

using namespace levydrift;

namespace {

MCConfig small_config() {
  MCConfig cfg;
  cfg.model = make_example2d();
  cfg.theta0 = {2.0, 1.0};
  cfg.x0 = {1.0, 1.0};
  cfg.noise.dim = 2;
  cfg.noise.components.push_back({VarianceGamma{5.0, 3.0}, 0});
  cfg.noise.components.push_back({Wiener{1.0}, 0});
  cfg.noise.components.push_back({Stable{1.5, 1.0, 0.0}, 1});
  cfg.cells = {{200, 0.1}};
  cfg.rules = {ThresholdRule::none(), ThresholdRule::const_times_eps(0.2)};
  cfg.replications = 40;
  cfg.seed = 4242;
  cfg.refinement = 2;
  cfg.estimator = MCConfig::Estimator::ClosedForm;
  return cfg;
}

}  // namespace

TEST_CASE("normality stats: hand cases and known laws") {
  // symmetric two-point sample: skew 0, excess kurtosis -2
  std::vector<double> two;
  for (int i = 0; i < 500; ++i) {
    two.push_back(-1.0);
    two.push_back(1.0);
  }
  const NormalityStats s2 = normality_stats(two);
  CHECK(s2.skewness == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s2.excess_kurtosis == doctest::Approx(-2.0).epsilon(1e-12));

  // 1e5 standard normal draws
  Rng rng(55);
  std::vector<double> normal(100000);
  for (auto& v : normal) v = rng.normal();
  const NormalityStats sn = normality_stats(normal);
  CHECK(std::abs(sn.skewness) < 0.03);
  CHECK(std::abs(sn.excess_kurtosis) < 0.06);
  CHECK(sn.ks_distance < 0.01);

  // Student t(3) via normal/sqrt(chi2/3): heavy tails, large excess kurtosis
  std::vector<double> t3(10000);
  for (auto& v : t3) {
    const double z = rng.normal();
    double chi = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double g = rng.normal();
      chi += g * g;
    }
    v = z / std::sqrt(chi / 3.0);
  }
  CHECK(normality_stats(t3).excess_kurtosis > 2.0);
}

TEST_CASE("qq data: tiny and degenerate samples") {
  const auto pairs = qq_data({-1.0, 0.0, 1.0});
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0].first == doctest::Approx(norm_quantile(1.0 / 6.0)));
  CHECK(pairs[1].first == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(pairs[2].first == doctest::Approx(norm_quantile(5.0 / 6.0)));
  CHECK(pairs[0].second == -1.0);
  CHECK(pairs[2].second == 1.0);

  const auto flat = qq_data({2.5, 2.5, 2.5, 2.5});
  for (const auto& [tq, eq] : flat) CHECK(eq == 2.5);

  // N(0,1) sample: regression slope of the pairs is ~1
  Rng rng(56);
  std::vector<double> z(10000);
  for (auto& v : z) v = rng.normal();
  const auto qp = qq_data(z);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [tq, eq] : qp) {
    sx += tq;
    sy += eq;
    sxx += tq * tq;
    sxy += tq * eq;
  }
  const double n = static_cast<double>(qp.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(1.0).epsilon(0.05));
  // monotone in both coordinates
  for (std::size_t i = 1; i < qp.size(); ++i) {
    CHECK(qp[i].first > qp[i - 1].first);
    CHECK(qp[i].second >= qp[i - 1].second);
  }
}

TEST_CASE("run_mc: M=2 aggregation is plain arithmetic") {
  MCConfig cfg = small_config();
  cfg.replications = 2;
  cfg.rules = {ThresholdRule::none()};
  const MCReport report = run_mc(cfg, 1);
  REQUIRE(report.entries.size() == 1);
  const CellRuleStats& e = report.entries[0];
  REQUIRE(e.count == 2);
  // recompute the two replications by hand
  std::vector<std::vector<double>> ths;
  for (int rep = 0; rep < 2; ++rep) {
    Rng rng(substream_seed(cfg.seed, 0, rep));
    SimulateOptions opt;
    opt.refinement = cfg.refinement;
    const SamplePath p = simulate(cfg.model, cfg.theta0, cfg.x0, 0.1, 200,
                                  cfg.noise, 0.0, rng, opt);
    ths.push_back(
        estimate_example2d_closed_form(p, cfg.model, cfg.rules[0]).theta_hat);
  }
  for (int i = 0; i < 2; ++i) {
    const double mean = 0.5 * (ths[0][i] + ths[1][i]);
    CHECK(e.params[i].mean == doctest::Approx(mean).epsilon(1e-14));
    const double sd = std::sqrt((ths[0][i] - mean) * (ths[0][i] - mean) +
                                (ths[1][i] - mean) * (ths[1][i] - mean));
    CHECK(e.params[i].sd == doctest::Approx(sd).epsilon(1e-12));
    CHECK(e.params[i].min == doctest::Approx(std::min(ths[0][i], ths[1][i])));
    CHECK(e.params[i].max == doctest::Approx(std::max(ths[0][i], ths[1][i])));
  }
}

TEST_CASE("run_mc: rule none and rule fixed:inf give identical reports") {
  MCConfig cfg = small_config();
  cfg.rules = {ThresholdRule::none(),
               ThresholdRule::fixed(std::numeric_limits<double>::infinity())};
  const MCReport report = run_mc(cfg, 2);
  REQUIRE(report.entries.size() == 2);
  for (int i = 0; i < report.p; ++i) {
    CHECK(report.entries[0].params[i].mean == report.entries[1].params[i].mean);
    CHECK(report.entries[0].params[i].sd == report.entries[1].params[i].sd);
  }
  CHECK(report.entries[0].failures == report.entries[1].failures);
}

TEST_CASE("run_mc: byte-identical outputs for 1 vs 3 threads") {
  const MCConfig cfg = small_config();
  const MCReport a = run_mc(cfg, 1);
  const MCReport b = run_mc(cfg, 3);
  CHECK(a.to_csv() == b.to_csv());
  CHECK(a.qq_csv() == b.qq_csv());
  CHECK(a.tables_markdown() == b.tables_markdown());
}

TEST_CASE("run_mc: validation rejects bad configs") {
  MCConfig cfg = small_config();
  cfg.replications = 1;
  CHECK_THROWS(cfg.validate());
  cfg = small_config();
  cfg.cells[0].n = 0;
  CHECK_THROWS(cfg.validate());
  cfg = small_config();
  cfg.cells.clear();
  CHECK_THROWS(cfg.validate());
  cfg = small_config();
  cfg.model = make_linear1d();
  CHECK_THROWS(cfg.validate());  // closed form needs example2d
  cfg = small_config();
  cfg.theta0 = {20.0, 1.0};  // outside the box
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("report CSV: fixed schema, round-trips through a reader") {
  const MCConfig cfg = small_config();
  const MCReport report = run_mc(cfg, 2);
  const std::string csv = report.to_csv();
  std::istringstream is(csv);
  std::string header;
  std::getline(is, header);
  CHECK(header ==
        "model,n,eps,rule,param,mean,sd,se,skew,exkurt,ks,n_delta,diag_n14,"
        "retained_frac,failures");
  int rows = 0;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    ++rows;
    // parse mean back and compare to the report value
    std::vector<std::string> toks;
    std::size_t pos = 0;
    while (true) {
      const auto c = line.find(',', pos);
      toks.push_back(line.substr(pos, c == std::string::npos ? std::string::npos
                                                             : c - pos));
      if (c == std::string::npos) break;
      pos = c + 1;
    }
    REQUIRE(toks.size() == 15);
    const int param = std::stoi(toks[4]);
    const auto& e = report.entries[rows <= 2 ? 0 : 1];
    CHECK(std::stod(toks[5]) ==
          doctest::Approx(e.params[param - 1].mean).epsilon(1e-15));
  }
  CHECK(rows == 4);  // 1 cell x 2 rules x 2 params
}

TEST_CASE("markdown tables carry the paper-format diagnostics row") {
  MCConfig cfg = small_config();
  cfg.cells = {{3000, 0.3}};
  cfg.replications = 4;
  cfg.rules = {ThresholdRule::const_times_eps(0.2)};
  const MCReport report = run_mc(cfg, 2);
  const std::string md = report.tables_markdown();
  CHECK(md.find("(180,1.48)") != std::string::npos);
  CHECK(md.find("rule const:0.2") != std::string::npos);
}

TEST_CASE("failures counted and excluded; starved cells marked invalid") {
  MCConfig cfg = small_config();
  // delta far below every |dX|: the filter starves every replication
  cfg.rules = {ThresholdRule::fixed(1e-9)};
  cfg.replications = 6;
  const MCReport report = run_mc(cfg, 2);
  REQUIRE(report.entries.size() == 1);
  CHECK(report.entries[0].invalid);
  CHECK(report.entries[0].failures == 6);
  CHECK(report.entries[0].count == 0);
  CHECK(report.entries[0].invalid_reason.find("failed") != std::string::npos);
  // the CSV still renders (nan fields) and the run continued
  const std::string csv = report.to_csv();
  CHECK(csv.find("nan") != std::string::npos);
}
