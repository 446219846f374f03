#include "levydrift/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "levydrift/linalg.hpp"

namespace levydrift {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// ThresholdRule
// ---------------------------------------------------------------------------

double ThresholdRule::delta(int n, double eps) const {
  switch (kind) {
    case Kind::None:
      return kInf;
    case Kind::ConstTimesEps:
      return c * eps;
    case Kind::PowerLaw:
      return c * std::pow(eps, rho_e) * std::pow(static_cast<double>(n), -rho_n);
    case Kind::Fixed:
      return value;
  }
  return kInf;
}

std::string ThresholdRule::label() const {
  std::ostringstream os;
  if (ideal) os << "ideal";
  switch (kind) {
    case Kind::None:
      os << (ideal ? "-none" : "none");
      break;
    case Kind::ConstTimesEps:
      os << (ideal ? ":" : "const:") << c;
      break;
    case Kind::PowerLaw:
      os << (ideal ? "-power:" : "power:") << c << "," << rho_e << "," << rho_n;
      break;
    case Kind::Fixed:
      os << (ideal ? "-fixed:" : "fixed:") << value;
      break;
  }
  return os.str();
}

ThresholdRule ThresholdRule::none() { return ThresholdRule{}; }

ThresholdRule ThresholdRule::const_times_eps(double c, bool ideal) {
  ThresholdRule r;
  r.kind = Kind::ConstTimesEps;
  r.c = c;
  r.ideal = ideal;
  return r;
}

ThresholdRule ThresholdRule::power(double c, double rho_e, double rho_n,
                                   bool ideal) {
  ThresholdRule r;
  r.kind = Kind::PowerLaw;
  r.c = c;
  r.rho_e = rho_e;
  r.rho_n = rho_n;
  r.ideal = ideal;
  return r;
}

ThresholdRule ThresholdRule::fixed(double value, bool ideal) {
  ThresholdRule r;
  r.kind = Kind::Fixed;
  r.value = value;
  r.ideal = ideal;
  return r;
}

namespace {

std::vector<double> parse_numbers(const std::string& s, std::size_t expect,
                                  const std::string& what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    const std::string tok = s.substr(pos, comma == std::string::npos
                                              ? std::string::npos
                                              : comma - pos);
    if (tok == "inf") {
      out.push_back(kInf);
    } else {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (...) {
        throw std::invalid_argument("rule " + what + ": bad number '" + tok + "'");
      }
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.size() != expect) {
    throw std::invalid_argument("rule " + what + ": expected " +
                                std::to_string(expect) + " parameters");
  }
  return out;
}

}  // namespace

ThresholdRule ThresholdRule::parse(const std::string& text) {
  const std::size_t colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string rest =
      colon == std::string::npos ? std::string() : text.substr(colon + 1);
  if (head == "none") {
    if (!rest.empty()) throw std::invalid_argument("rule none takes no parameters");
    return none();
  }
  if (head == "const") return const_times_eps(parse_numbers(rest, 1, "const")[0]);
  if (head == "power") {
    const auto v = parse_numbers(rest, 3, "power");
    return power(v[0], v[1], v[2]);
  }
  if (head == "fixed") return fixed(parse_numbers(rest, 1, "fixed")[0]);
  if (head == "ideal") return const_times_eps(parse_numbers(rest, 1, "ideal")[0], true);
  if (head == "ideal-power") {
    const auto v = parse_numbers(rest, 3, "ideal-power");
    return power(v[0], v[1], v[2], true);
  }
  if (head == "ideal-fixed") return fixed(parse_numbers(rest, 1, "ideal-fixed")[0], true);
  throw std::invalid_argument("unknown threshold rule '" + text + "'");
}

std::string to_string(OptStatus s) {
  switch (s) {
    case OptStatus::Converged:
      return "converged";
    case OptStatus::BoundaryHit:
      return "boundary";
    case OptStatus::Bisection:
      return "bisection";
    case OptStatus::MaxIter:
      return "max_iter";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Prepared observation data and the contrast core
// ---------------------------------------------------------------------------

namespace {

struct Prepared {
  int n = 0, d = 0;
  double dn = 0.0, eps = 0.0;
  const double* states = nullptr;  // (n+1) x d
  std::vector<double> dx;          // n x d
  std::vector<double> dx_norm;     // n
  std::vector<double> max_jump;    // n, only with a jump log
  bool has_jump_log = false;
  double tau = 0.0;
};

Prepared prepare(const SamplePath& path) {
  Prepared p;
  p.n = path.n_intervals();
  p.d = path.d;
  if (p.n < 1) throw EstimationError(EstimationError::Kind::BadInput,
                                     "estimate: empty sample path");
  if (!(path.epsilon > 0.0)) {
    throw EstimationError(EstimationError::Kind::BadInput,
                          "estimate: path.epsilon must be > 0");
  }
  p.dn = 1.0 / p.n;
  p.eps = path.epsilon;
  p.states = path.states.data();
  p.has_jump_log = path.has_jump_log;
  p.tau = path.tau;
  p.dx.resize(static_cast<std::size_t>(p.n) * p.d);
  p.dx_norm.resize(p.n);
  for (int k = 0; k < p.n; ++k) {
    double s = 0.0;
    for (int c = 0; c < p.d; ++c) {
      const double v = path.states[static_cast<std::size_t>(k + 1) * p.d + c] -
                       path.states[static_cast<std::size_t>(k) * p.d + c];
      p.dx[static_cast<std::size_t>(k) * p.d + c] = v;
      s += v * v;
    }
    p.dx_norm[k] = std::sqrt(s);
  }
  if (p.has_jump_log) {
    p.max_jump.resize(p.n);
    for (int k = 0; k < p.n; ++k) p.max_jump[k] = path.max_jump_magnitude(k);
  }
  return p;
}

std::vector<char> make_mask(const Prepared& p, bool ideal, double delta,
                            long& retained) {
  if (!(delta > 0.0)) {
    throw EstimationError(EstimationError::Kind::BadInput,
                          "filter threshold delta must be > 0");
  }
  std::vector<char> mask(p.n, 1);
  retained = p.n;
  if (ideal) {
    if (!p.has_jump_log) {
      throw EstimationError(EstimationError::Kind::BadInput,
                            "ideal filter requires data with a jump log");
    }
    if (p.tau > 0.0 && p.eps * p.tau >= delta) {
      throw EstimationError(
          EstimationError::Kind::BadInput,
          "ideal filter not decidable from the jump log: eps*tau >= delta");
    }
    for (int k = 0; k < p.n; ++k) {
      if (p.eps * p.max_jump[k] > delta) {
        mask[k] = 0;
        --retained;
      }
    }
  } else if (std::isfinite(delta)) {
    for (int k = 0; k < p.n; ++k) {
      if (p.dx_norm[k] > delta) {
        mask[k] = 0;
        --retained;
      }
    }
  }
  return mask;
}

// One pass over the data: contrast (always), half-gradient G and half-Hessian K
// when requested.
void eval_contrast(const Prepared& pd, const ModelSpec& model,
                   std::span<const double> theta, const std::vector<char>& mask,
                   double* phi, std::vector<double>* G, std::vector<double>* K) {
  const int n = pd.n, d = pd.d, p = model.p;
  const double dn = pd.dn;
  const double inv_eps2 = 1.0 / (pd.eps * pd.eps);
  std::vector<double> b(d), grad, hess, chi(d);
  if (G) {
    grad.resize(static_cast<std::size_t>(p) * d);
    G->assign(p, 0.0);
  }
  if (K) {
    if (grad.empty()) grad.resize(static_cast<std::size_t>(p) * d);
    hess.resize(static_cast<std::size_t>(p) * p * d);
    K->assign(static_cast<std::size_t>(p) * p, 0.0);
  }
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    if (!mask[k]) continue;
    const std::span<const double> x(pd.states + static_cast<std::size_t>(k) * d, d);
    model.drift(x, theta, b);
    double s = 0.0;
    for (int c = 0; c < d; ++c) {
      chi[c] = pd.dx[static_cast<std::size_t>(k) * d + c] - b[c] * dn;
      s += chi[c] * chi[c];
    }
    acc += s;
    if (G || K) model.grad_theta(x, theta, grad);
    if (G) {
      for (int i = 0; i < p; ++i) {
        double g = 0.0;
        for (int c = 0; c < d; ++c) g += grad[i * d + c] * chi[c];
        (*G)[i] -= inv_eps2 * g;
      }
    }
    if (K) {
      model.hess_theta(x, theta, hess);
      for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
          double v = 0.0;
          for (int c = 0; c < d; ++c) {
            v += dn * grad[i * d + c] * grad[j * d + c] -
                 hess[(static_cast<std::size_t>(i) * p + j) * d + c] * chi[c];
          }
          (*K)[i * p + j] += inv_eps2 * v;
        }
      }
    }
  }
  if (K) {
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < i; ++j) (*K)[i * p + j] = (*K)[j * p + i];
    }
  }
  if (phi) *phi = inv_eps2 / dn * acc;
}

double contrast_with_mask(const Prepared& pd, const ModelSpec& model,
                          std::span<const double> theta,
                          const std::vector<char>& mask) {
  double phi = 0.0;
  eval_contrast(pd, model, theta, mask, &phi, nullptr, nullptr);
  return phi;
}

}  // namespace

double contrast_lse(const SamplePath& path, const ModelSpec& model,
                    std::span<const double> theta) {
  const Prepared pd = prepare(path);
  const std::vector<char> mask(pd.n, 1);
  return contrast_with_mask(pd, model, theta, mask);
}

double contrast_threshold(const SamplePath& path, const ModelSpec& model,
                          std::span<const double> theta, double delta) {
  const Prepared pd = prepare(path);
  long retained = 0;
  const auto mask = make_mask(pd, false, delta, retained);
  return contrast_with_mask(pd, model, theta, mask);
}

double contrast_ideal(const SamplePath& path, const ModelSpec& model,
                      std::span<const double> theta, double delta) {
  const Prepared pd = prepare(path);
  long retained = 0;
  const auto mask = make_mask(pd, true, delta, retained);
  return contrast_with_mask(pd, model, theta, mask);
}

std::vector<double> gradient(const SamplePath& path, const ModelSpec& model,
                             std::span<const double> theta,
                             const ThresholdRule& rule) {
  const Prepared pd = prepare(path);
  long retained = 0;
  const auto mask = make_mask(pd, rule.ideal, rule.delta(pd.n, pd.eps), retained);
  std::vector<double> G;
  eval_contrast(pd, model, theta, mask, nullptr, &G, nullptr);
  return G;
}

std::vector<double> hessian(const SamplePath& path, const ModelSpec& model,
                            std::span<const double> theta,
                            const ThresholdRule& rule) {
  const Prepared pd = prepare(path);
  long retained = 0;
  const auto mask = make_mask(pd, rule.ideal, rule.delta(pd.n, pd.eps), retained);
  std::vector<double> K;
  eval_contrast(pd, model, theta, mask, nullptr, nullptr, &K);
  return K;
}

// ---------------------------------------------------------------------------
// Box-constrained damped Newton with multi-start
// ---------------------------------------------------------------------------

namespace {

struct NewtonOutcome {
  std::vector<double> theta;
  double phi = kInf;
  OptStatus status = OptStatus::MaxIter;
};

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Golden-section sweep over each axis; used as a fallback when Newton stalls.
void coordinate_bisection(const Prepared& pd, const ModelSpec& model,
                          const std::vector<char>& mask, std::vector<double>& theta,
                          double& phi) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int sweep = 0; sweep < 8; ++sweep) {
    const double before = phi;
    for (int i = 0; i < model.p; ++i) {
      double lo = model.theta_lo[i], hi = model.theta_hi[i];
      std::vector<double> probe = theta;
      auto f = [&](double t) {
        probe[i] = t;
        return contrast_with_mask(pd, model, probe, mask);
      };
      double x1 = hi - gr * (hi - lo);
      double x2 = lo + gr * (hi - lo);
      double f1 = f(x1), f2 = f(x2);
      for (int it = 0; it < 90 && hi - lo > 1e-13 * (1.0 + std::abs(hi)); ++it) {
        if (f1 <= f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - gr * (hi - lo);
          f1 = f(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + gr * (hi - lo);
          f2 = f(x2);
        }
      }
      const double cand = 0.5 * (lo + hi);
      const double fc = f(cand);
      if (fc < phi) {
        theta[i] = cand;
        phi = fc;
      }
    }
    if (before - phi <= 1e-14 * (1.0 + std::abs(before))) break;
  }
}

NewtonOutcome newton_from(const Prepared& pd, const ModelSpec& model,
                          std::vector<double> theta, const std::vector<char>& mask,
                          const OptimizerSettings& st) {
  const int p = model.p;
  NewtonOutcome out;
  double phi = 0.0;
  std::vector<double> G, K, cand(p);
  eval_contrast(pd, model, theta, mask, &phi, &G, &K);
  OptStatus status = OptStatus::MaxIter;
  bool used_bisection = false;
  for (int it = 0; it < st.max_iter; ++it) {
    if (inf_norm(G) < st.grad_tol * (1.0 + std::abs(phi))) {
      status = OptStatus::Converged;
      break;
    }
    std::vector<double> dir;
    double slope = 0.0;
    if (solve_small(K, G, p, dir)) {
      for (double& v : dir) v = -v;
      for (int i = 0; i < p; ++i) slope += G[i] * dir[i];
    }
    if (dir.empty() || slope >= 0.0) {
      dir.assign(p, 0.0);
      for (int i = 0; i < p; ++i) dir[i] = -G[i];
    }
    // Backtracking with projection into the box; G is half the contrast
    // gradient, so the Armijo decrement uses 2 * G . (cand - theta).
    double lambda = 1.0;
    bool moved = false;
    double step_size = 0.0;
    for (int ls = 0; ls < 50; ++ls, lambda *= 0.5) {
      double proj_slope = 0.0;
      double max_move = 0.0;
      for (int i = 0; i < p; ++i) {
        cand[i] = std::clamp(theta[i] + lambda * dir[i], model.theta_lo[i],
                             model.theta_hi[i]);
        proj_slope += G[i] * (cand[i] - theta[i]);
        max_move = std::max(max_move, std::abs(cand[i] - theta[i]));
      }
      if (max_move == 0.0) continue;  // fully clamped; shrink
      const double phi_cand = contrast_with_mask(pd, model, cand, mask);
      if (proj_slope < 0.0 &&
          (phi_cand <= phi + 2e-4 * proj_slope || phi_cand < phi)) {
        theta = cand;
        phi = phi_cand;
        moved = true;
        step_size = max_move;
        break;
      }
    }
    if (!moved) {
      coordinate_bisection(pd, model, mask, theta, phi);
      used_bisection = true;
      eval_contrast(pd, model, theta, mask, &phi, &G, &K);
      status = OptStatus::Bisection;
      break;
    }
    eval_contrast(pd, model, theta, mask, &phi, &G, &K);
    if (step_size < st.step_tol) {
      status = OptStatus::Converged;
      break;
    }
  }
  if (status == OptStatus::MaxIter &&
      inf_norm(G) < st.grad_tol * (1.0 + std::abs(phi))) {
    status = OptStatus::Converged;
  }
  if (used_bisection && status == OptStatus::Converged) {
    status = OptStatus::Bisection;
  }
  // Boundary flag: any coordinate pinned to the box.
  if (status != OptStatus::MaxIter) {
    for (int i = 0; i < p; ++i) {
      const double w = model.theta_hi[i] - model.theta_lo[i];
      if (theta[i] <= model.theta_lo[i] + 1e-9 * w ||
          theta[i] >= model.theta_hi[i] - 1e-9 * w) {
        status = OptStatus::BoundaryHit;
        break;
      }
    }
  }
  out.status = status;
  out.theta = std::move(theta);
  out.phi = phi;
  return out;
}

void fill_result_common(EstimationResult& r, const SamplePath& path, long retained,
                        int n) {
  r.retained = retained;
  r.retained_fraction = static_cast<double>(retained) / n;
  if (!path.theta0.empty()) {
    r.normalized_error.resize(r.theta_hat.size());
    for (std::size_t i = 0; i < r.theta_hat.size(); ++i) {
      r.normalized_error[i] = (r.theta_hat[i] - path.theta0[i]) / path.epsilon;
    }
  }
}

}  // namespace

EstimationResult estimate(const SamplePath& path, const ModelSpec& model,
                          const ThresholdRule& rule,
                          const OptimizerSettings& settings) {
  model.validate();
  const Prepared pd = prepare(path);
  const double delta = rule.delta(pd.n, pd.eps);
  long retained = 0;
  const auto mask = make_mask(pd, rule.ideal, delta, retained);
  if (retained < model.p) {
    std::ostringstream os;
    os << "filter removed too much data: retained " << retained << " < p = "
       << model.p;
    throw EstimationError(EstimationError::Kind::FilterStarved, os.str());
  }

  // Multi-start grid: starts_per_axis points per axis.
  const int spa = std::max(1, settings.starts_per_axis);
  long n_starts = 1;
  for (int i = 0; i < model.p; ++i) {
    n_starts *= spa;
    if (n_starts > 4096) {
      throw EstimationError(EstimationError::Kind::BadInput,
                            "too many optimizer starts; reduce starts_per_axis");
    }
  }
  NewtonOutcome best;
  bool any = false;
  std::vector<double> start(model.p);
  for (long s = 0; s < n_starts; ++s) {
    long rem = s;
    for (int i = 0; i < model.p; ++i) {
      const int idx = static_cast<int>(rem % spa);
      rem /= spa;
      const double frac = (spa == 1) ? 0.5
                                     : (1.0 + 4.0 * idx / (spa - 1.0)) / 6.0;
      start[i] = model.theta_lo[i] + frac * (model.theta_hi[i] - model.theta_lo[i]);
    }
    NewtonOutcome o = newton_from(pd, model, start, mask, settings);
    if (o.status == OptStatus::MaxIter) continue;
    if (!any || o.phi < best.phi) {
      best = std::move(o);
      any = true;
    }
  }
  if (!any) {
    throw EstimationError(EstimationError::Kind::NoConvergence,
                          "all optimizer starts failed to converge");
  }
  EstimationResult r;
  r.theta_hat = best.theta;
  r.status = best.status;
  r.objective = best.phi;
  r.delta_used = delta;
  fill_result_common(r, path, retained, pd.n);
  return r;
}

EstimationResult estimate_example2d_closed_form(const SamplePath& path,
                                                const ModelSpec& model,
                                                const ThresholdRule& rule,
                                                const OptimizerSettings& settings) {
  if (model.id != "example2d" || model.d != 2 || model.p != 2) {
    throw EstimationError(EstimationError::Kind::BadInput,
                          "closed-form solver requires the example2d model");
  }
  const Prepared pd = prepare(path);
  const double delta = rule.delta(pd.n, pd.eps);
  long retained = 0;
  const auto mask = make_mask(pd, rule.ideal, delta, retained);
  if (retained < 1) {
    throw EstimationError(EstimationError::Kind::FilterStarved,
                          "filter removed too much data: retained = 0");
  }

  // Per-interval statistics entering both score equations.
  const int n = pd.n;
  std::vector<double> s(n);
  for (int k = 0; k < n; ++k) {
    const double x1 = pd.states[2 * k];
    const double x2 = pd.states[2 * k + 1];
    s[k] = x1 * x1 + x2 * x2;
  }

  // theta1 solves sum dX1/sqrt(t1 + s_k) 1{filter} = Dn * retained.
  auto score1 = [&](double t1) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      if (!mask[k]) continue;
      acc += pd.dx[2 * k] / std::sqrt(t1 + s[k]);
    }
    return acc - pd.dn * static_cast<double>(retained);
  };

  EstimationResult r;
  bool fallback = false;
  double t1 = 0.0;
  {
    double lo = model.theta_lo[0], hi = model.theta_hi[0];
    double flo = score1(lo), fhi = score1(hi);
    if (flo == 0.0) {
      t1 = lo;
    } else if (fhi == 0.0) {
      t1 = hi;
    } else if (flo * fhi < 0.0) {
      for (int it = 0; it < 100 && hi - lo > 1e-14 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = score1(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (flo * fm < 0.0) {
          hi = mid;
          fhi = fm;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      t1 = 0.5 * (lo + hi);
    } else {
      fallback = true;  // no sign change over the box
    }
  }

  if (fallback) {
    EstimationResult g = estimate(path, model, rule, settings);
    g.closed_form_fallback = true;
    return g;
  }

  // theta2 is the explicit filtered ratio.
  double num = 0.0, den = 0.0;
  for (int k = 0; k < n; ++k) {
    if (!mask[k]) continue;
    const double x2 = pd.states[2 * k + 1];
    const double root = std::sqrt(1.0 + s[k]);
    num += pd.dx[2 * k + 1] * x2 / root;
    den += x2 * x2 / (1.0 + s[k]);
  }
  den /= static_cast<double>(n);
  if (den == 0.0) {
    throw EstimationError(EstimationError::Kind::BadInput,
                          "closed-form theta2: zero denominator");
  }
  const double t2 = -num / den;

  r.theta_hat = {t1, t2};
  r.status = OptStatus::Converged;
  const auto clamped = model.clamp_to_box(r.theta_hat);
  if (clamped != r.theta_hat) {
    r.theta_hat = clamped;
    r.status = OptStatus::BoundaryHit;
  }
  r.objective = contrast_with_mask(pd, model, r.theta_hat, mask);
  r.delta_used = delta;
  fill_result_common(r, path, retained, pd.n);
  return r;
}

void apply_sigma_normalization(EstimationResult& result, const LevySpec& spec,
                               double eps, std::span<const double> theta0) {
  if (!(eps > 0.0) || !std::isfinite(result.delta_used)) return;
  const auto s2 = truncated_variance(spec, result.delta_used / eps);
  double total = 0.0;
  for (double v : s2) total += v;
  const double sigma = std::sqrt(total);
  if (!(sigma > 0.0)) return;
  result.normalized_error_sigma.resize(result.theta_hat.size());
  for (std::size_t i = 0; i < result.theta_hat.size(); ++i) {
    result.normalized_error_sigma[i] =
        (result.theta_hat[i] - theta0[i]) / (sigma * eps);
  }
}

std::vector<double> zeta_oracle(const ModelSpec& model,
                                std::span<const double> theta0,
                                const OdeSolution& ode_fine,
                                const std::vector<double>& noise_increments,
                                double fine_dt) {
  const int d = model.d, p = model.p;
  const std::size_t steps = ode_fine.times.size() - 1;
  if (noise_increments.size() != steps * static_cast<std::size_t>(d)) {
    throw std::invalid_argument(
        "zeta_oracle: noise increment grid does not match the ODE grid");
  }
  const double grid_dt = ode_fine.times[1] - ode_fine.times[0];
  if (std::abs(grid_dt - fine_dt) > 1e-12 * std::max(1.0, grid_dt)) {
    throw std::invalid_argument("zeta_oracle: fine_dt does not match the ODE grid");
  }
  std::vector<double> grad(static_cast<std::size_t>(p) * d);
  std::vector<double> raw(p, 0.0);
  for (std::size_t j = 0; j < steps; ++j) {
    model.grad_theta(
        std::span<const double>(ode_fine.states.data() + j * d, d), theta0, grad);
    for (int i = 0; i < p; ++i) {
      double acc = 0.0;
      for (int c = 0; c < d; ++c) {
        acc += grad[i * d + c] * noise_increments[j * d + c];
      }
      raw[i] += acc;
    }
  }
  const FisherResult fisher = fisher_matrix(model, theta0, ode_fine);
  const auto inv = invert_small(fisher.matrix, p);
  std::vector<double> zeta(p, 0.0);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) zeta[i] += inv[i * p + j] * raw[j];
  }
  return zeta;
}

RegimeDiagnostics regime_diagnostics(int n, double eps, const ThresholdRule& rule,
                                     const LevySpec& spec, double gamma,
                                     double rho) {
  if (n < 1 || !(eps > 0.0)) {
    throw std::invalid_argument("regime_diagnostics: need n >= 1 and eps > 0");
  }
  RegimeDiagnostics d;
  d.delta = rule.delta(n, eps);
  const double dn = 1.0 / n;
  d.n_delta = n * d.delta;
  d.diag_n14 = d.delta / eps * std::pow(static_cast<double>(n), 0.25);
  d.delta_over_dn = d.delta / dn;
  d.eps_dngamma_over_delta = eps * std::pow(dn, gamma) / d.delta;
  d.delta_over_eps = d.delta / eps;
  d.n_eps_dngamma = n * eps * std::pow(dn, gamma);
  if (std::isfinite(d.delta_over_eps)) {
    const auto lam = tail_mass(spec, d.delta_over_eps);
    const auto s2 = truncated_variance(spec, d.delta_over_eps);
    double lam_total = 0.0, s2_total = 0.0;
    for (double v : lam) lam_total += v;
    for (double v : s2) s2_total += v;
    const double sigma = std::sqrt(s2_total);
    d.lambda_over_nlogn = lam_total / (n * std::log(static_cast<double>(n)));
    d.sigma_rho_logn = std::pow(sigma, rho) * std::log(static_cast<double>(n));
    d.n_eps_sigma = n * eps * sigma;
    d.ar_ratio = sigma / d.delta_over_eps;
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    d.lambda_over_nlogn = nan;
    d.sigma_rho_logn = nan;
    d.n_eps_sigma = nan;
    d.ar_ratio = nan;
  }
  return d;
}

}  // namespace levydrift
