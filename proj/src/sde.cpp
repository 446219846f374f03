#include "levydrift/sde.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "levydrift/linalg.hpp"

namespace levydrift {

namespace {

void rk4_step(const ModelSpec& model, std::span<const double> theta,
              std::vector<double>& x, double dt, std::vector<double>& k1,
              std::vector<double>& k2, std::vector<double>& k3,
              std::vector<double>& k4, std::vector<double>& tmp) {
  const int d = model.d;
  model.drift(x, theta, k1);
  for (int c = 0; c < d; ++c) tmp[c] = x[c] + 0.5 * dt * k1[c];
  model.drift(tmp, theta, k2);
  for (int c = 0; c < d; ++c) tmp[c] = x[c] + 0.5 * dt * k2[c];
  model.drift(tmp, theta, k3);
  for (int c = 0; c < d; ++c) tmp[c] = x[c] + dt * k3[c];
  model.drift(tmp, theta, k4);
  for (int c = 0; c < d; ++c) {
    x[c] += dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    if (!std::isfinite(x[c])) {
      throw std::runtime_error("solve_ode_limit: non-finite drift evaluation");
    }
  }
}

std::vector<double> rk4_endpoint(const ModelSpec& model,
                                 std::span<const double> theta,
                                 std::span<const double> x0, int steps) {
  const int d = model.d;
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> k1(d), k2(d), k3(d), k4(d), tmp(d);
  const double dt = 1.0 / steps;
  for (int s = 0; s < steps; ++s) rk4_step(model, theta, x, dt, k1, k2, k3, k4, tmp);
  return x;
}

}  // namespace

OdeSolution solve_ode_limit(const ModelSpec& model, std::span<const double> theta0,
                            std::span<const double> x0, int n_fine) {
  model.validate();
  if (n_fine < 1) throw std::invalid_argument("solve_ode_limit: n_fine must be >= 1");
  const int d = model.d;
  OdeSolution sol;
  sol.d = d;
  sol.times.resize(n_fine + 1);
  sol.states.resize(static_cast<std::size_t>(n_fine + 1) * d);
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> k1(d), k2(d), k3(d), k4(d), tmp(d);
  const double dt = 1.0 / n_fine;
  for (int c = 0; c < d; ++c) sol.states[c] = x[c];
  sol.times[0] = 0.0;
  for (int s = 0; s < n_fine; ++s) {
    rk4_step(model, theta0, x, dt, k1, k2, k3, k4, tmp);
    sol.times[s + 1] = (s + 1) * dt;
    for (int c = 0; c < d; ++c) {
      sol.states[static_cast<std::size_t>(s + 1) * d + c] = x[c];
    }
  }

  // Step-halving self-check on the endpoint.
  const std::vector<double> fine = rk4_endpoint(model, theta0, x0, 2 * n_fine);
  double rel = 0.0;
  for (int c = 0; c < d; ++c) {
    rel = std::max(rel, std::abs(fine[c] - x[c]) / (1.0 + std::abs(fine[c])));
  }
  if (rel > 1e-8) {
    std::ostringstream os;
    os << "solve_ode_limit: step-halving check failed (relative gap " << rel
       << "); increase n_fine";
    throw std::runtime_error(os.str());
  }
  return sol;
}

FisherResult fisher_matrix(const ModelSpec& model, std::span<const double> theta0,
                           const OdeSolution& ode) {
  const int d = model.d;
  const int p = model.p;
  const std::size_t npts = ode.times.size();
  std::vector<double> grad(static_cast<std::size_t>(p) * d);
  std::vector<double> acc(static_cast<std::size_t>(p) * p, 0.0);
  std::vector<double> cell(static_cast<std::size_t>(p) * p);
  for (std::size_t t = 0; t < npts; ++t) {
    model.grad_theta(
        std::span<const double>(ode.states.data() + t * d, d), theta0, grad);
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) {
        double s = 0.0;
        for (int c = 0; c < d; ++c) s += grad[i * d + c] * grad[j * d + c];
        cell[i * p + j] = s;
      }
    }
    // trapezoid weights
    const double w = (t == 0 || t + 1 == npts) ? 0.5 : 1.0;
    const double dt = ode.times[1] - ode.times[0];
    for (int k = 0; k < p * p; ++k) acc[k] += w * dt * cell[k];
  }
  FisherResult out;
  out.matrix = std::move(acc);
  out.p = p;
  const auto eig = symmetric_eigenvalues(out.matrix, p);
  out.min_eigenvalue = eig.front();
  out.positive_definite = eig.front() > 1e-12;
  return out;
}

double identifiability_gap(const ModelSpec& model, std::span<const double> theta,
                           std::span<const double> theta0, const OdeSolution& ode) {
  const int d = model.d;
  const std::size_t npts = ode.times.size();
  std::vector<double> b1(d), b0(d);
  double acc = 0.0;
  const double dt = ode.times[1] - ode.times[0];
  for (std::size_t t = 0; t < npts; ++t) {
    const std::span<const double> x(ode.states.data() + t * d, d);
    model.drift(x, theta, b1);
    model.drift(x, theta0, b0);
    double s = 0.0;
    for (int c = 0; c < d; ++c) s += (b1[c] - b0[c]) * (b1[c] - b0[c]);
    const double w = (t == 0 || t + 1 == npts) ? 0.5 : 1.0;
    acc += w * dt * s;
  }
  return acc;
}

double SamplePath::max_jump_magnitude(int k) const {
  if (!has_jump_log) return 0.0;
  double m = 0.0;
  for (const auto& j : jumps[k]) m = std::max(m, std::abs(j.size));
  return m;
}

SamplePath simulate(const ModelSpec& model, std::span<const double> theta0,
                    std::span<const double> x0, double epsilon, int n,
                    const LevySpec& spec, double tau, Rng& rng,
                    const SimulateOptions& opt) {
  model.validate();
  spec.validate();
  if (n < 1) throw std::invalid_argument("simulate: n must be >= 1");
  if (epsilon < 0.0) throw std::invalid_argument("simulate: epsilon must be >= 0");
  if (opt.refinement < 1) {
    throw std::invalid_argument("simulate: refinement must be >= 1");
  }
  if (spec.dim != model.d) {
    throw std::invalid_argument("simulate: noise dim must match model dim");
  }
  const int d = model.d;
  const int m = opt.refinement;
  const long nm = static_cast<long>(n) * m;
  const double dt = 1.0 / static_cast<double>(nm);

  std::vector<double> incr;
  PathWithJumps pwj;
  if (opt.jump_log) {
    pwj = sample_path_with_jumps(spec, static_cast<int>(nm), dt, tau, rng);
    incr.resize(static_cast<std::size_t>(nm) * d);
    for (long j = 0; j < nm; ++j) {
      for (int c = 0; c < d; ++c) {
        incr[j * d + c] = pwj.values[(j + 1) * d + c] - pwj.values[j * d + c];
      }
    }
  } else {
    incr = sample_increments(spec, static_cast<int>(nm), dt, rng);
  }

  SamplePath path;
  path.d = d;
  path.epsilon = epsilon;
  path.model_id = model.id;
  path.theta0.assign(theta0.begin(), theta0.end());
  path.refinement = m;
  path.tau = tau;
  path.times.resize(n + 1);
  path.states.resize(static_cast<std::size_t>(n + 1) * d);

  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> b(d);
  for (int c = 0; c < d; ++c) path.states[c] = x[c];
  path.times[0] = 0.0;
  for (long j = 0; j < nm; ++j) {
    model.drift(x, theta0, b);
    for (int c = 0; c < d; ++c) {
      x[c] += b[c] * dt + epsilon * incr[j * d + c];
      if (!std::isfinite(x[c])) {
        std::ostringstream os;
        os << "simulate: state blow-up (non-finite) at fine step " << j + 1
           << " of " << nm;
        throw std::runtime_error(os.str());
      }
    }
    if ((j + 1) % m == 0) {
      const long k = (j + 1) / m;
      path.times[k] = static_cast<double>(k) / n;
      for (int c = 0; c < d; ++c) {
        path.states[static_cast<std::size_t>(k) * d + c] = x[c];
      }
    }
  }

  if (opt.keep_noise) {
    path.has_noise = true;
    path.fine_dt = dt;
    path.noise_increments = std::move(incr);
  }
  if (opt.jump_log) {
    path.has_jump_log = true;
    path.jumps.assign(n, {});
    for (const auto& ev : pwj.jumps) {
      const int k = ev.interval / m;
      path.jumps[k].push_back({ev.time, ev.coord, ev.size});
    }
  }
  return path;
}

RescaledData rescale_longterm(const std::vector<double>& times,
                              const std::vector<double>& states, int d,
                              double alpha) {
  if (times.size() < 2 || states.size() != times.size() * d) {
    throw std::invalid_argument("rescale_longterm: inconsistent data sizes");
  }
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw std::invalid_argument("rescale_longterm: alpha must lie in (1,2]");
  }
  const double T = times.back();
  if (!(T > 1.0)) {
    throw std::invalid_argument("rescale_longterm: horizon T must exceed 1");
  }
  RescaledData out;
  out.d = d;
  out.horizon = T;
  out.epsilon = std::pow(T, 1.0 / alpha - 1.0);
  out.times.resize(times.size());
  out.states.resize(states.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    out.times[k] = times[k] / T;
    for (int c = 0; c < d; ++c) {
      out.states[k * d + c] = states[k * d + c] / T;
    }
  }
  return out;
}

}  // namespace levydrift
