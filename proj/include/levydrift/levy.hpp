#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "levydrift/rng.hpp"

namespace levydrift {

// ---------------------------------------------------------------------------
// Jump laws for compound Poisson components.
// ---------------------------------------------------------------------------

struct GaussianJumps {
  double mu = 0.0;
  double sd = 1.0;
};

struct UniformJumps {
  double lo = -1.0;
  double hi = 1.0;
};

using JumpLaw = std::variant<GaussianJumps, UniformJumps>;

double jump_law_sample(const JumpLaw& law, Rng& rng);
double jump_law_tail_prob(const JumpLaw& law, double kappa);        // P(|Y| > kappa)
double jump_law_trunc_second(const JumpLaw& law, double kappa);     // E[Y^2 1{|Y|<=kappa}]
double jump_law_trunc_first(const JumpLaw& law, double kappa);      // E[Y 1{|Y|<=kappa}]
double jump_law_abs_moment_above(const JumpLaw& law, double q);     // E[|Y|^q 1{|Y|>1}]
std::string jump_law_label(const JumpLaw& law);

// ---------------------------------------------------------------------------
// Noise components. Each acts on one coordinate; coordinates are independent.
// ---------------------------------------------------------------------------

struct Wiener {
  double sigma = 1.0;
};

struct LinearDrift {
  double rate = 0.0;  // constant drift per unit time
};

struct CompoundPoisson {
  double rate = 1.0;  // lambda_cp
  JumpLaw law = GaussianJumps{};
};

/// Variance gamma with Levy density (kappa/|z|) e^{-xi |z|}. Subordination
/// uses the unit-mean gamma clock: c = lambda_g = kappa, sigma_vg = sqrt(2 kappa)/xi.
struct VarianceGamma {
  double kappa = 1.0;
  double xi = 1.0;
  double clock_shape() const { return kappa; }       // c
  double clock_rate() const { return kappa; }        // lambda_g (scale 1/lambda_g)
  double sigma_vg() const;
};

/// S_alpha(scale, skew, 0), 1-parameterization (Cont-Tankov p. 94).
struct Stable {
  double alpha = 1.5;
  double scale = 1.0;
  double skew = 0.0;
  /// Total Levy density constant: nu(dz) = (c_plus 1{z>0} + c_minus 1{z<0}) |z|^{-1-alpha} dz.
  double c_total() const;
  double c_plus() const { return 0.5 * (1.0 + skew) * c_total(); }
  double c_minus() const { return 0.5 * (1.0 - skew) * c_total(); }
};

using Component = std::variant<Wiener, LinearDrift, CompoundPoisson, VarianceGamma, Stable>;

struct PlacedComponent {
  Component component;
  int coord = 0;
};

struct LevySpec {
  int dim = 1;
  std::vector<PlacedComponent> components;

  void validate() const;  // throws std::invalid_argument on bad parameters
  bool has_jump_components() const;
  bool has_infinite_activity() const;
};

// ---------------------------------------------------------------------------
// Per-component Levy-measure integrals (scalar; the vector measure lives on the
// coordinate axes, so per-coordinate and total values are sums over components).
// ---------------------------------------------------------------------------

double component_sigma2(const Component& c, double kappa);  // int_{|z|<=k} z^2 nu(dz)
double component_lambda(const Component& c, double kappa);  // int_{|z|>k} nu(dz)
// int_{|z|>1} |z|^q nu(dz); +inf when divergent.
double component_q2_integral(const Component& c, double q);
// b + int_{|z|<=x} z|z|^2/(1+|z|^2) nu - int_{|z|>x} z/(1+|z|^2) nu, telescoped
// per family to closed form (equals int_{|z|<=x} z nu(dz) plus the family drift).
double component_h_drift(const Component& c, double x);

// ---------------------------------------------------------------------------
// Spec-level analytics.
// ---------------------------------------------------------------------------

/// sigma^2(kappa) per coordinate.
std::vector<double> truncated_variance(const LevySpec& spec, double kappa);
/// lambda(kappa) per coordinate.
std::vector<double> tail_mass(const LevySpec& spec, double kappa);

/// Pruitt's h(x) for a one-dimensional spec.
double pruitt_h(const LevySpec& spec, double x);

struct ActivityIndex {
  double beta_hat = 0.0;
  bool degenerate = false;  // h vanished on the whole grid
};
/// Least-squares slope of log h(x) vs log(1/x) over the finest half of x_grid.
/// x_grid: decreasing, >= 4 points, spanning >= 2 decades below 1.
ActivityIndex estimate_activity_index(const LevySpec& spec,
                                      const std::vector<double>& x_grid);

struct Q2Check {
  bool finite = false;
  double value = 0.0;  // meaningful when finite
};
Q2Check check_q2(const LevySpec& spec, double q);

// ---------------------------------------------------------------------------
// Sampling.
// ---------------------------------------------------------------------------

/// n i.i.d. increments of Q over steps of length delta, row-major n x dim.
std::vector<double> sample_increments(const LevySpec& spec, int n, double delta,
                                      Rng& rng);

struct JumpEvent {
  int interval = 0;  // jump time lies in (interval*delta, (interval+1)*delta]
  double time = 0.0;
  int coord = 0;
  double size = 0.0;
};

struct PathWithJumps {
  std::vector<double> times;                  // n+1 grid points
  std::vector<double> values;                 // (n+1) x dim, cumulative Q
  std::vector<double> continuous_increments;  // n x dim: drift + Gaussian share
  std::vector<JumpEvent> jumps;               // sorted by (interval, time)
  int dim = 1;
  double truncation = 0.0;
};

/// Jumps with |z| > tau simulated as compound Poisson with rate lambda(tau) and
/// the normalized tail law (all logged, uniform times in each interval); jumps
/// with |z| <= tau replaced by a Gaussian of variance sigma^2(tau) per unit time
/// (Asmussen-Rosinski). Requires tau > 0 for infinite-activity components.
PathWithJumps sample_path_with_jumps(const LevySpec& spec, int n, double delta,
                                     double tau, Rng& rng);

std::string component_label(const Component& c);

}  // namespace levydrift
