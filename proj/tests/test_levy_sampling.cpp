#include <doctest.h>

#include <cmath>
#include <vector>

#include "levydrift/levy.hpp"
#include "levydrift/stats.hpp"

using namespace levydrift;

namespace {
LevySpec one(Component c) {
  LevySpec s;
  s.dim = 1;
  s.components.push_back({std::move(c), 0});
  return s;
}
}  // namespace

TEST_CASE("wiener increments: mean and variance within 5 standard errors") {
  Rng rng(101);
  const int N = 100000;
  const auto inc = sample_increments(one(Wiener{1.0}), N, 1.0, rng);
  const double m = sample_mean(inc);
  const double v = sample_sd(inc);
  CHECK(std::abs(m) < 5.0 / std::sqrt(static_cast<double>(N)));  // se = 1/sqrt(N)
  CHECK(std::abs(v * v - 1.0) < 5.0 * std::sqrt(2.0 / N));
}

TEST_CASE("variance gamma increments: variance sigma_vg^2 * E[G] within 5 se") {
  Rng rng(102);
  const int N = 100000;
  const VarianceGamma vg{5.0, 3.0};
  const auto inc = sample_increments(one(vg), N, 1.0, rng);
  CHECK(std::abs(sample_mean(inc)) < 5.0 * std::sqrt(10.0 / 9.0 / N));
  // Var = sigma_vg^2 * E[G_1] = (10/9) * 1;  Var(x^2) = 3 sigma^4 E[G^2] - Var^2
  const double var = sample_sd(inc) * sample_sd(inc);
  const double eg2 = 5.0 * 6.0 / 25.0;  // E[G^2], G ~ Gamma(5, 1/5)
  const double var_x2 =
      3.0 * std::pow(10.0 / 9.0, 2.0) * eg2 / 5.0 * 5.0 - std::pow(10.0 / 9.0, 2.0);
  CHECK(std::abs(var - 10.0 / 9.0) < 5.0 * std::sqrt(var_x2 / N));
}

TEST_CASE("compound Poisson increments: mean and variance (rate * moments)") {
  Rng rng(103);
  const int N = 100000;
  const auto inc = sample_increments(one(CompoundPoisson{2.0, GaussianJumps{0.0, 1.0}}),
                                     N, 1.0, rng);
  // Var = rate * E[Y^2] = 2; E[x^4] = 3*rate*E[Y^4]-ish; use generous bound 5*sqrt(20/N)
  CHECK(std::abs(sample_mean(inc)) < 5.0 * std::sqrt(2.0 / N));
  const double var = sample_sd(inc) * sample_sd(inc);
  CHECK(std::abs(var - 2.0) < 5.0 * std::sqrt(20.0 / N));
}

TEST_CASE("stable self-similarity: (X1+X2)/2^{1/alpha} has the law of X1") {
  Rng rng(104);
  const int N = 10000;
  const LevySpec st = one(Stable{1.5, 1.0, 0.0});
  const auto a = sample_increments(st, N, 1.0, rng);
  const auto b = sample_increments(st, N, 1.0, rng);
  const auto ref = sample_increments(st, N, 1.0, rng);
  std::vector<double> combined(N);
  const double scale = std::pow(2.0, 2.0 / 3.0);
  for (int i = 0; i < N; ++i) combined[i] = (a[i] + b[i]) / scale;
  const double d = ks_distance_two_sample(combined, ref);
  // 1% two-sample KS critical value: 1.628*sqrt((n+m)/(n*m))
  CHECK(d < 1.628 * std::sqrt(2.0 / N));
}

TEST_CASE("empty spec samples the zero process") {
  Rng rng(105);
  LevySpec empty;
  empty.dim = 2;
  const auto inc = sample_increments(empty, 50, 0.1, rng);
  for (double v : inc) CHECK(v == 0.0);
}

TEST_CASE("increments and jump logs are deterministic given the seed") {
  LevySpec spec;
  spec.dim = 2;
  spec.components.push_back({VarianceGamma{5.0, 3.0}, 0});
  spec.components.push_back({Wiener{1.0}, 0});
  spec.components.push_back({Stable{1.5, 1.0, 0.0}, 1});
  Rng r1(7), r2(7);
  const auto a = sample_increments(spec, 200, 0.01, r1);
  const auto b = sample_increments(spec, 200, 0.01, r2);
  CHECK(a == b);

  LevySpec cp = one(CompoundPoisson{3.0, GaussianJumps{0.0, 1.0}});
  Rng r3(9), r4(9);
  const auto p1 = sample_path_with_jumps(cp, 100, 0.01, 0.0, r3);
  const auto p2 = sample_path_with_jumps(cp, 100, 0.01, 0.0, r4);
  CHECK(p1.values == p2.values);
  REQUIRE(p1.jumps.size() == p2.jumps.size());
  for (std::size_t i = 0; i < p1.jumps.size(); ++i) {
    CHECK(p1.jumps[i].time == p2.jumps[i].time);
    CHECK(p1.jumps[i].size == p2.jumps[i].size);
  }
}

TEST_CASE("compound Poisson path: expected logged jump count matches the rate") {
  const int paths = 10000;
  double total = 0.0;
  for (int r = 0; r < paths; ++r) {
    Rng rng(substream_seed(2001, 0, r));
    const auto p = sample_path_with_jumps(one(CompoundPoisson{2.0, GaussianJumps{}}),
                                          100, 0.01, 0.0, rng);
    total += static_cast<double>(p.jumps.size());
  }
  CHECK(total / paths == doctest::Approx(2.0).epsilon(0.025));
}

TEST_CASE("variance gamma path: jump count is Poisson(lambda(tau))") {
  const double tau = 0.01;
  const LevySpec vg = one(VarianceGamma{5.0, 3.0});
  const double lam = tail_mass(vg, tau)[0];  // 10*E1(0.03)
  CHECK(lam == doctest::Approx(29.591187).epsilon(1e-6));
  const int paths = 3000;
  double total = 0.0;
  for (int r = 0; r < paths; ++r) {
    Rng rng(substream_seed(2002, 0, r));
    const auto p = sample_path_with_jumps(vg, 100, 0.01, tau, rng);
    total += static_cast<double>(p.jumps.size());
  }
  const double mean = total / paths;
  CHECK(std::abs(mean - lam) < 5.0 * std::sqrt(lam / paths));
}

TEST_CASE("wiener-only path: empty jump log, values form a Gaussian walk") {
  Rng rng(106);
  const auto p = sample_path_with_jumps(one(Wiener{2.0}), 500, 0.002, 0.5, rng);
  CHECK(p.jumps.empty());
  std::vector<double> inc(500);
  for (int k = 0; k < 500; ++k) inc[k] = p.values[k + 1] - p.values[k];
  CHECK(std::abs(sample_mean(inc)) < 5.0 * 2.0 * std::sqrt(0.002 / 500));
  const double var = sample_sd(inc) * sample_sd(inc);
  CHECK(var == doctest::Approx(4.0 * 0.002).epsilon(0.35));
}

TEST_CASE("path bookkeeping identity: values = continuous + logged jumps") {
  LevySpec spec;
  spec.dim = 2;
  spec.components.push_back({VarianceGamma{5.0, 3.0}, 0});
  spec.components.push_back({Wiener{1.0}, 0});
  spec.components.push_back({Stable{1.5, 1.0, 0.0}, 1});
  spec.components.push_back({LinearDrift{0.7}, 1});
  Rng rng(107);
  const int n = 300;
  const auto p = sample_path_with_jumps(spec, n, 1.0 / n, 0.05, rng);
  std::vector<double> jump_sum(static_cast<std::size_t>(n) * 2, 0.0);
  for (const auto& ev : p.jumps) {
    jump_sum[static_cast<std::size_t>(ev.interval) * 2 + ev.coord] += ev.size;
  }
  for (int k = 0; k < n; ++k) {
    for (int c = 0; c < 2; ++c) {
      const double got = p.values[(k + 1) * 2 + c] - p.values[k * 2 + c];
      const double expect = p.continuous_increments[k * 2 + c] + jump_sum[k * 2 + c];
      CHECK(got == doctest::Approx(expect).epsilon(1e-12));
    }
  }
  // jump times strictly increasing within each interval and inside it
  for (std::size_t i = 1; i < p.jumps.size(); ++i) {
    if (p.jumps[i].interval == p.jumps[i - 1].interval) {
      CHECK(p.jumps[i].time > p.jumps[i - 1].time);
    }
  }
  for (const auto& ev : p.jumps) {
    CHECK(ev.time > ev.interval * (1.0 / n));
    CHECK(ev.time <= (ev.interval + 1) * (1.0 / n) + 1e-15);
  }
}

TEST_CASE("finite-activity CP with tau=0: logged jumps equal the jump part") {
  Rng rng(108);
  const auto p = sample_path_with_jumps(one(CompoundPoisson{5.0, UniformJumps{-1.0, 1.0}}),
                                        200, 0.005, 0.0, rng);
  double total_jumps = 0.0;
  for (const auto& ev : p.jumps) total_jumps += ev.size;
  // no Gaussian/drift part at tau = 0: values end at the jump sum
  CHECK(p.values.back() == doctest::Approx(total_jumps).epsilon(1e-12));
}

TEST_CASE("infinite activity requires tau > 0; skewed stable rejected") {
  Rng rng(109);
  CHECK_THROWS_WITH_AS(
      sample_path_with_jumps(one(VarianceGamma{5.0, 3.0}), 10, 0.1, 0.0, rng),
      doctest::Contains("truncation tau > 0"), std::invalid_argument);
  CHECK_THROWS(sample_path_with_jumps(one(Stable{1.5, 1.0, 0.0}), 10, 0.1, 0.0, rng));
  CHECK_THROWS_WITH_AS(
      sample_path_with_jumps(one(Stable{1.5, 1.0, 0.5}), 10, 0.1, 0.1, rng),
      doctest::Contains("skewed stable"), std::invalid_argument);
}

TEST_CASE("stable tail jumps have magnitude above tau with the right law") {
  Rng rng(110);
  const double tau = 0.1;
  const auto p = sample_path_with_jumps(one(Stable{1.5, 1.0, 0.0}), 5000, 0.01,
                                        tau, rng);
  REQUIRE(p.jumps.size() > 200);
  int above_2tau = 0;
  for (const auto& ev : p.jumps) {
    CHECK(std::abs(ev.size) > tau);
    if (std::abs(ev.size) > 2.0 * tau) ++above_2tau;
  }
  // P(|Z| > 2 tau | |Z| > tau) = 2^{-alpha} = 2^{-1.5} ~ 0.3536
  const double frac = static_cast<double>(above_2tau) / p.jumps.size();
  CHECK(frac == doctest::Approx(std::pow(2.0, -1.5)).epsilon(0.25));
}
