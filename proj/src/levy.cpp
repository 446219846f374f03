#include "levydrift/levy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "levydrift/quadrature.hpp"
#include "levydrift/stats.hpp"

namespace levydrift {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double e1(double x) { return boost::math::expint(1, x); }
double upper_gamma(double a, double x) { return boost::math::tgamma(a, x); }
}  // namespace

// ---------------------------------------------------------------------------
// Jump laws
// ---------------------------------------------------------------------------

double jump_law_sample(const JumpLaw& law, Rng& rng) {
  return std::visit(
      [&rng](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, GaussianJumps>) {
          return l.mu + l.sd * rng.normal();
        } else {
          return l.lo + (l.hi - l.lo) * rng.uniform();
        }
      },
      law);
}

double jump_law_tail_prob(const JumpLaw& law, double kappa) {
  return std::visit(
      [kappa](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, GaussianJumps>) {
          return norm_cdf(-(kappa - l.mu) / l.sd) + norm_cdf((-kappa - l.mu) / l.sd);
        } else {
          const double len = l.hi - l.lo;
          const double above = std::max(0.0, l.hi - std::max(l.lo, kappa));
          const double below = std::max(0.0, std::min(l.hi, -kappa) - l.lo);
          return (above + below) / len;
        }
      },
      law);
}

namespace {

// E[Y^m 1{-kappa <= Y <= kappa}] for Y ~ N(mu, sd^2). The closed forms cancel
// catastrophically when kappa << sd, so narrow windows fall back to the
// in-library Gauss-Kronrod rule on the smooth integrand.
double gaussian_window_moment(double mu, double sd, double kappa, int m) {
  const double at = (-kappa - mu) / sd;
  const double bt = (kappa - mu) / sd;
  if (bt - at < 0.5) {
    auto f = [mu, sd, m](double y) {
      double p = 1.0;
      for (int i = 0; i < m; ++i) p *= y;
      return p * norm_pdf((y - mu) / sd) / sd;
    };
    return quad::integrate(f, -kappa, kappa, {1e-14, 1e-13, 50});
  }
  const double P = norm_cdf(bt) - norm_cdf(at);
  const double dphi = norm_pdf(at) - norm_pdf(bt);
  if (m == 1) return mu * P + sd * dphi;
  const double zphi = at * norm_pdf(at) - bt * norm_pdf(bt);
  return mu * mu * P + 2.0 * mu * sd * dphi + sd * sd * (P + zphi);
}

}  // namespace

double jump_law_trunc_second(const JumpLaw& law, double kappa) {
  return std::visit(
      [kappa](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, GaussianJumps>) {
          return gaussian_window_moment(l.mu, l.sd, kappa, 2);
        } else {
          const double a = std::max(l.lo, -kappa);
          const double b = std::min(l.hi, kappa);
          if (b <= a) return 0.0;
          return (b * b * b - a * a * a) / (3.0 * (l.hi - l.lo));
        }
      },
      law);
}

double jump_law_trunc_first(const JumpLaw& law, double kappa) {
  return std::visit(
      [kappa](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, GaussianJumps>) {
          return gaussian_window_moment(l.mu, l.sd, kappa, 1);
        } else {
          const double a = std::max(l.lo, -kappa);
          const double b = std::min(l.hi, kappa);
          if (b <= a) return 0.0;
          return (b * b - a * a) / (2.0 * (l.hi - l.lo));
        }
      },
      law);
}

double jump_law_abs_moment_above(const JumpLaw& law, double q) {
  return std::visit(
      [q](const auto& l) -> double {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, GaussianJumps>) {
          if (l.mu == 0.0) {
            const double s = l.sd;
            return std::pow(s, q) * std::pow(2.0, 0.5 * q) / std::sqrt(M_PI) *
                   upper_gamma(0.5 * (q + 1.0), 1.0 / (2.0 * s * s));
          }
          const double mu = l.mu, s = l.sd;
          auto f = [mu, s, q](double y) {
            return std::pow(y, q) *
                   (norm_pdf((y - mu) / s) + norm_pdf((y + mu) / s)) / s;
          };
          return quad::integrate_upper(f, 1.0);
        } else {
          const double len = l.hi - l.lo;
          double total = 0.0;
          if (l.hi > 1.0) {
            const double a = std::max(l.lo, 1.0);
            total += (std::pow(l.hi, q + 1.0) - std::pow(a, q + 1.0)) / (q + 1.0);
          }
          if (l.lo < -1.0) {
            const double b = std::min(l.hi, -1.0);
            total += (std::pow(-l.lo, q + 1.0) - std::pow(-b, q + 1.0)) / (q + 1.0);
          }
          return total / len;
        }
      },
      law);
}

std::string jump_law_label(const JumpLaw& law) {
  std::ostringstream os;
  std::visit(
      [&os](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, GaussianJumps>) {
          os << "gaussian(mu=" << l.mu << ",sd=" << l.sd << ")";
        } else {
          os << "uniform(lo=" << l.lo << ",hi=" << l.hi << ")";
        }
      },
      law);
  return os.str();
}

// ---------------------------------------------------------------------------
// Components
// ---------------------------------------------------------------------------

double VarianceGamma::sigma_vg() const { return std::sqrt(2.0 * kappa) / xi; }

double Stable::c_total() const {
  // Samorodnitsky-Taqqu relation between the scale and the Levy density constant.
  double c_alpha;
  if (alpha == 1.0) {
    c_alpha = 2.0 / M_PI;
  } else {
    c_alpha = (1.0 - alpha) / (std::tgamma(2.0 - alpha) * std::cos(M_PI * alpha / 2.0));
  }
  return c_alpha * std::pow(scale, alpha);
}

namespace {

void validate_jump_law(const JumpLaw& law) {
  std::visit(
      [](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, GaussianJumps>) {
          if (!(l.sd > 0.0)) {
            throw std::invalid_argument("gaussian jump law: sd must be > 0");
          }
        } else {
          if (!(l.lo < l.hi)) {
            throw std::invalid_argument("uniform jump law: need lo < hi");
          }
        }
      },
      law);
}

void validate_component(const Component& c) {
  std::visit(
      [](const auto& comp) {
        using T = std::decay_t<decltype(comp)>;
        if constexpr (std::is_same_v<T, Wiener>) {
          if (!(comp.sigma >= 0.0)) {
            throw std::invalid_argument("wiener: sigma must be >= 0");
          }
        } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
          if (!(comp.rate > 0.0)) {
            throw std::invalid_argument("compound_poisson: rate must be > 0");
          }
          validate_jump_law(comp.law);
        } else if constexpr (std::is_same_v<T, VarianceGamma>) {
          if (!(comp.kappa > 0.0) || !(comp.xi > 0.0)) {
            throw std::invalid_argument("variance_gamma: kappa and xi must be > 0");
          }
        } else if constexpr (std::is_same_v<T, Stable>) {
          if (!(comp.alpha > 0.0 && comp.alpha < 2.0)) {
            throw std::invalid_argument("stable: alpha must lie in (0,2)");
          }
          if (!(comp.scale > 0.0)) {
            throw std::invalid_argument("stable: scale must be > 0");
          }
          if (!(comp.skew >= -1.0 && comp.skew <= 1.0)) {
            throw std::invalid_argument("stable: skew must lie in [-1,1]");
          }
        }
      },
      c);
}

}  // namespace

void LevySpec::validate() const {
  if (dim < 1) throw std::invalid_argument("LevySpec: dim must be >= 1");
  for (const auto& pc : components) {
    if (pc.coord < 0 || pc.coord >= dim) {
      throw std::invalid_argument("LevySpec: component coordinate out of range");
    }
    validate_component(pc.component);
  }
}

bool LevySpec::has_jump_components() const {
  for (const auto& pc : components) {
    if (std::holds_alternative<CompoundPoisson>(pc.component) ||
        std::holds_alternative<VarianceGamma>(pc.component) ||
        std::holds_alternative<Stable>(pc.component)) {
      return true;
    }
  }
  return false;
}

bool LevySpec::has_infinite_activity() const {
  for (const auto& pc : components) {
    if (std::holds_alternative<VarianceGamma>(pc.component) ||
        std::holds_alternative<Stable>(pc.component)) {
      return true;
    }
  }
  return false;
}

std::string component_label(const Component& c) {
  std::ostringstream os;
  std::visit(
      [&os](const auto& comp) {
        using T = std::decay_t<decltype(comp)>;
        if constexpr (std::is_same_v<T, Wiener>) {
          os << "wiener(sigma=" << comp.sigma << ")";
        } else if constexpr (std::is_same_v<T, LinearDrift>) {
          os << "drift(a=" << comp.rate << ")";
        } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
          os << "compound_poisson(rate=" << comp.rate << ","
             << jump_law_label(comp.law) << ")";
        } else if constexpr (std::is_same_v<T, VarianceGamma>) {
          os << "variance_gamma(kappa=" << comp.kappa << ",xi=" << comp.xi << ")";
        } else {
          os << "stable(alpha=" << comp.alpha << ",scale=" << comp.scale
             << ",skew=" << comp.skew << ")";
        }
      },
      c);
  return os.str();
}

// ---------------------------------------------------------------------------
// Levy-measure integrals per component
// ---------------------------------------------------------------------------

double component_sigma2(const Component& c, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("sigma2: kappa must be > 0");
  return std::visit(
      [kappa](const auto& comp) -> double {
        using T = std::decay_t<decltype(comp)>;
        if constexpr (std::is_same_v<T, Wiener> || std::is_same_v<T, LinearDrift>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
          return comp.rate * jump_law_trunc_second(comp.law, kappa);
        } else if constexpr (std::is_same_v<T, VarianceGamma>) {
          const double u = comp.xi * kappa;
          double core;
          if (u < 1e-2) {
            // series for 1 - e^{-u}(1+u) = sum_{k>=2} (-1)^k (k-1) u^k / k!
            core = u * u / 2.0 - u * u * u / 3.0 + std::pow(u, 4) / 8.0 -
                   std::pow(u, 5) / 30.0 + std::pow(u, 6) / 144.0 -
                   std::pow(u, 7) / 840.0;
          } else {
            core = 1.0 - std::exp(-u) * (1.0 + u);
          }
          return 2.0 * comp.kappa * core / (comp.xi * comp.xi);
        } else {
          return comp.c_total() * std::pow(kappa, 2.0 - comp.alpha) /
                 (2.0 - comp.alpha);
        }
      },
      c);
}

double component_lambda(const Component& c, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("lambda: kappa must be > 0");
  return std::visit(
      [kappa](const auto& comp) -> double {
        using T = std::decay_t<decltype(comp)>;
        if constexpr (std::is_same_v<T, Wiener> || std::is_same_v<T, LinearDrift>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
          return comp.rate * jump_law_tail_prob(comp.law, kappa);
        } else if constexpr (std::is_same_v<T, VarianceGamma>) {
          return 2.0 * comp.kappa * e1(comp.xi * kappa);
        } else {
          return comp.c_total() * std::pow(kappa, -comp.alpha) / comp.alpha;
        }
      },
      c);
}

double component_q2_integral(const Component& c, double q) {
  if (!(q > 0.0)) throw std::invalid_argument("q2: q must be > 0");
  return std::visit(
      [q](const auto& comp) -> double {
        using T = std::decay_t<decltype(comp)>;
        if constexpr (std::is_same_v<T, Wiener> || std::is_same_v<T, LinearDrift>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
          return comp.rate * jump_law_abs_moment_above(comp.law, q);
        } else if constexpr (std::is_same_v<T, VarianceGamma>) {
          return 2.0 * comp.kappa * std::pow(comp.xi, -q) * upper_gamma(q, comp.xi);
        } else {
          if (q >= comp.alpha) return kInf;
          return comp.c_total() / (comp.alpha - q);
        }
      },
      c);
}

double component_h_drift(const Component& c, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("h_drift: x must be > 0");
  return std::visit(
      [x](const auto& comp) -> double {
        using T = std::decay_t<decltype(comp)>;
        if constexpr (std::is_same_v<T, Wiener>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, LinearDrift>) {
          return comp.rate;
        } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
          return comp.rate * jump_law_trunc_first(comp.law, x);
        } else if constexpr (std::is_same_v<T, VarianceGamma>) {
          return 0.0;
        } else {
          if (comp.skew == 0.0) return 0.0;
          if (comp.alpha == 1.0) {
            throw std::invalid_argument(
                "no analytic/quadrature rule for the drift term of a skewed "
                "alpha=1 stable component");
          }
          const double cdiff = comp.c_plus() - comp.c_minus();
          return cdiff * std::pow(x, 1.0 - comp.alpha) / (1.0 - comp.alpha);
        }
      },
      c);
}

// ---------------------------------------------------------------------------
// Spec-level analytics
// ---------------------------------------------------------------------------

std::vector<double> truncated_variance(const LevySpec& spec, double kappa) {
  if (!(kappa > 0.0)) {
    throw std::invalid_argument("truncated_variance: kappa must be > 0");
  }
  spec.validate();
  std::vector<double> out(spec.dim, 0.0);
  for (const auto& pc : spec.components) {
    out[pc.coord] += component_sigma2(pc.component, kappa);
  }
  return out;
}

std::vector<double> tail_mass(const LevySpec& spec, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("tail_mass: kappa must be > 0");
  spec.validate();
  std::vector<double> out(spec.dim, 0.0);
  for (const auto& pc : spec.components) {
    out[pc.coord] += component_lambda(pc.component, kappa);
  }
  return out;
}

double pruitt_h(const LevySpec& spec, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("pruitt_h: x must be > 0");
  spec.validate();
  if (spec.dim != 1) {
    throw std::invalid_argument("pruitt_h: spec must be one-dimensional");
  }
  double lam = 0.0, s2 = 0.0, drift = 0.0;
  for (const auto& pc : spec.components) {
    lam += component_lambda(pc.component, x);
    s2 += component_sigma2(pc.component, x);
    drift += component_h_drift(pc.component, x);
  }
  return lam + s2 / (x * x) + std::abs(drift) / x;
}

ActivityIndex estimate_activity_index(const LevySpec& spec,
                                      const std::vector<double>& x_grid) {
  if (x_grid.size() < 4) {
    throw std::invalid_argument("activity index: need >= 4 grid points");
  }
  for (std::size_t i = 1; i < x_grid.size(); ++i) {
    if (!(x_grid[i] < x_grid[i - 1])) {
      throw std::invalid_argument("activity index: grid must be decreasing");
    }
  }
  if (!(x_grid.front() < 1.0)) {
    throw std::invalid_argument("activity index: grid must lie below 1");
  }
  if (!(x_grid.front() / x_grid.back() >= 100.0)) {
    throw std::invalid_argument("activity index: grid must span >= 2 decades");
  }

  std::vector<double> h(x_grid.size());
  bool any_positive = false;
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    h[i] = pruitt_h(spec, x_grid[i]);
    if (h[i] > 0.0) any_positive = true;
  }
  if (!any_positive) return {0.0, true};

  // Fit on the finest half of the grid to suppress pre-asymptotic curvature.
  const std::size_t start = x_grid.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = start; i < x_grid.size(); ++i) {
    if (!(h[i] > 0.0)) continue;
    const double lx = std::log(1.0 / x_grid[i]);
    const double ly = std::log(h[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  if (cnt < 2) return {0.0, true};
  const double n = static_cast<double>(cnt);
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, false};
}

Q2Check check_q2(const LevySpec& spec, double q) {
  if (!(q > 0.0)) throw std::invalid_argument("check_q2: q must be > 0");
  spec.validate();
  double total = 0.0;
  for (const auto& pc : spec.components) {
    const double v = component_q2_integral(pc.component, q);
    if (std::isinf(v)) return {false, kInf};
    total += v;
  }
  return {true, total};
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

namespace {

double stable_increment(const Stable& s, double delta, Rng& rng) {
  const double y = rng.stable(s.alpha, s.skew);
  if (s.alpha != 1.0) {
    return s.scale * std::pow(delta, 1.0 / s.alpha) * y;
  }
  if (s.skew == 0.0) return s.scale * delta * y;
  // S_1 scaling picks up a logarithmic location term.
  const double a = s.scale * delta;
  return a * (y + (2.0 / M_PI) * s.skew * std::log(a));
}

}  // namespace

std::vector<double> sample_increments(const LevySpec& spec, int n, double delta,
                                      Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_increments: n must be >= 1");
  if (!(delta > 0.0)) {
    throw std::invalid_argument("sample_increments: delta must be > 0");
  }
  spec.validate();
  std::vector<double> out(static_cast<std::size_t>(n) * spec.dim, 0.0);
  const double sq_delta = std::sqrt(delta);
  for (const auto& pc : spec.components) {
    const int c = pc.coord;
    std::visit(
        [&](const auto& comp) {
          using T = std::decay_t<decltype(comp)>;
          for (int k = 0; k < n; ++k) {
            double inc = 0.0;
            if constexpr (std::is_same_v<T, Wiener>) {
              inc = comp.sigma * sq_delta * rng.normal();
            } else if constexpr (std::is_same_v<T, LinearDrift>) {
              inc = comp.rate * delta;
            } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
              const long long cnt = rng.poisson(comp.rate * delta);
              for (long long j = 0; j < cnt; ++j) {
                inc += jump_law_sample(comp.law, rng);
              }
            } else if constexpr (std::is_same_v<T, VarianceGamma>) {
              const double g = rng.gamma(comp.clock_shape() * delta,
                                         1.0 / comp.clock_rate());
              inc = comp.sigma_vg() * std::sqrt(g) * rng.normal();
            } else {
              inc = stable_increment(comp, delta, rng);
            }
            out[static_cast<std::size_t>(k) * spec.dim + c] += inc;
          }
        },
        pc.component);
  }
  return out;
}

namespace {

// Per-component setup for the jump-logging sampler.
struct JumpPlan {
  int coord = 0;
  double drift_per_unit = 0.0;  // folded continuous drift
  double gauss_sd_unit = 0.0;   // per unit time; step sd = gauss_sd_unit*sqrt(dt)
  double jump_rate = 0.0;
  // 0 = none, 1 = compound Poisson law conditioned on |Y| > tau,
  // 2 = stable tail, 3 = variance gamma tail
  int tail_kind = 0;
  const CompoundPoisson* cp = nullptr;
  double tau = 0.0;
  double vg_xi = 0.0;
  double stable_alpha = 0.0;
};

double sample_tail_jump(const JumpPlan& plan, Rng& rng) {
  switch (plan.tail_kind) {
    case 1: {
      double y;
      do {
        y = jump_law_sample(plan.cp->law, rng);
      } while (std::abs(y) <= plan.tau);
      return y;
    }
    case 2: {
      double u;
      do {
        u = rng.uniform();
      } while (u <= 0.0);
      const double mag = plan.tau * std::pow(u, -1.0 / plan.stable_alpha);
      return (rng.uniform() < 0.5) ? mag : -mag;
    }
    case 3: {
      // Rejection from a shifted exponential; accept with probability tau/z.
      double z;
      do {
        z = plan.tau + rng.exponential() / plan.vg_xi;
      } while (rng.uniform() * z > plan.tau);
      return (rng.uniform() < 0.5) ? z : -z;
    }
    default:
      return 0.0;
  }
}

}  // namespace

PathWithJumps sample_path_with_jumps(const LevySpec& spec, int n, double delta,
                                     double tau, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_path_with_jumps: n must be >= 1");
  if (!(delta > 0.0)) {
    throw std::invalid_argument("sample_path_with_jumps: delta must be > 0");
  }
  if (tau < 0.0) {
    throw std::invalid_argument("sample_path_with_jumps: tau must be >= 0");
  }
  spec.validate();

  std::vector<JumpPlan> plans;
  plans.reserve(spec.components.size());
  for (const auto& pc : spec.components) {
    JumpPlan plan;
    plan.coord = pc.coord;
    plan.tau = tau;
    std::visit(
        [&](const auto& comp) {
          using T = std::decay_t<decltype(comp)>;
          if constexpr (std::is_same_v<T, Wiener>) {
            plan.gauss_sd_unit = comp.sigma;
          } else if constexpr (std::is_same_v<T, LinearDrift>) {
            plan.drift_per_unit = comp.rate;
          } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
            plan.cp = &std::get<CompoundPoisson>(pc.component);
            plan.jump_rate = comp.rate * jump_law_tail_prob(comp.law, tau);
            plan.tail_kind = (plan.jump_rate > 1e-300) ? 1 : 0;
            if (tau > 0.0) {
              plan.gauss_sd_unit =
                  std::sqrt(comp.rate * jump_law_trunc_second(comp.law, tau));
              plan.drift_per_unit =
                  comp.rate * jump_law_trunc_first(comp.law, tau);
            }
          } else if constexpr (std::is_same_v<T, VarianceGamma>) {
            if (!(tau > 0.0)) {
              throw std::invalid_argument(
                  "sample_path_with_jumps: variance gamma has infinite jump "
                  "activity; a truncation tau > 0 is required");
            }
            plan.jump_rate = component_lambda(pc.component, tau);
            plan.tail_kind = 3;
            plan.vg_xi = comp.xi;
            plan.gauss_sd_unit = std::sqrt(component_sigma2(pc.component, tau));
          } else {
            if (!(tau > 0.0)) {
              throw std::invalid_argument(
                  "sample_path_with_jumps: stable noise has infinite jump "
                  "activity; a truncation tau > 0 is required");
            }
            if (comp.skew != 0.0) {
              throw std::invalid_argument(
                  "sample_path_with_jumps: skewed stable components are not "
                  "supported (small-jump compensation is asymmetric)");
            }
            plan.jump_rate = component_lambda(pc.component, tau);
            plan.tail_kind = 2;
            plan.stable_alpha = comp.alpha;
            plan.gauss_sd_unit = std::sqrt(component_sigma2(pc.component, tau));
          }
        },
        pc.component);
    plans.push_back(plan);
  }

  PathWithJumps path;
  path.dim = spec.dim;
  path.truncation = tau;
  path.times.resize(n + 1);
  for (int k = 0; k <= n; ++k) path.times[k] = k * delta;
  path.values.assign(static_cast<std::size_t>(n + 1) * spec.dim, 0.0);
  path.continuous_increments.assign(static_cast<std::size_t>(n) * spec.dim, 0.0);

  const double sq_delta = std::sqrt(delta);
  std::vector<double> jump_sum(spec.dim);
  for (int k = 0; k < n; ++k) {
    std::fill(jump_sum.begin(), jump_sum.end(), 0.0);
    const std::size_t first_event = path.jumps.size();
    for (const auto& plan : plans) {
      double cont = plan.drift_per_unit * delta;
      if (plan.gauss_sd_unit > 0.0) {
        cont += plan.gauss_sd_unit * sq_delta * rng.normal();
      }
      path.continuous_increments[static_cast<std::size_t>(k) * spec.dim +
                                 plan.coord] += cont;
      if (plan.tail_kind != 0 && plan.jump_rate > 0.0) {
        const long long cnt = rng.poisson(plan.jump_rate * delta);
        for (long long j = 0; j < cnt; ++j) {
          JumpEvent ev;
          ev.interval = k;
          ev.time = (k + rng.uniform()) * delta;
          ev.coord = plan.coord;
          ev.size = sample_tail_jump(plan, rng);
          jump_sum[plan.coord] += ev.size;
          path.jumps.push_back(ev);
        }
      }
    }
    std::sort(path.jumps.begin() + first_event, path.jumps.end(),
              [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });
    for (int c = 0; c < spec.dim; ++c) {
      const std::size_t row = static_cast<std::size_t>(k) * spec.dim + c;
      path.values[row + spec.dim] =
          path.values[row] + path.continuous_increments[row] + jump_sum[c];
    }
  }
  return path;
}

}  // namespace levydrift
