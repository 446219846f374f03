#pragma once

#include <span>
#include <string>
#include <vector>

#include "levydrift/levy.hpp"
#include "levydrift/model.hpp"

namespace levydrift {

struct OdeSolution {
  std::vector<double> times;   // n_fine + 1 points on [0,1]
  std::vector<double> states;  // (n_fine+1) x d row-major
  int d = 0;
};

/// RK4 solution of dX = b(X, theta0) dt on [0,1]. The endpoint is checked
/// against a half-step solve; a relative gap above 1e-8 throws.
OdeSolution solve_ode_limit(const ModelSpec& model, std::span<const double> theta0,
                            std::span<const double> x0, int n_fine);

struct FisherResult {
  std::vector<double> matrix;  // p x p
  int p = 0;
  double min_eigenvalue = 0.0;
  bool positive_definite = false;
};

/// I(theta0) = int_0^1 grad_theta b^T grad_theta b dt along the ODE limit,
/// composite trapezoid on the solution grid.
FisherResult fisher_matrix(const ModelSpec& model, std::span<const double> theta0,
                           const OdeSolution& ode);

/// F(theta) = int_0^1 |b(X0_t, theta) - b(X0_t, theta0)|^2 dt (trapezoid).
double identifiability_gap(const ModelSpec& model, std::span<const double> theta,
                           std::span<const double> theta0, const OdeSolution& ode);

struct JumpRecordObs {
  double time = 0.0;
  int coord = 0;
  double size = 0.0;
};

struct SamplePath {
  std::vector<double> times;   // n+1 uniform points on [0,1]
  std::vector<double> states;  // (n+1) x d
  int d = 0;
  double epsilon = 0.0;
  std::string model_id;
  std::vector<double> theta0;  // set for synthetic data

  int refinement = 1;
  double tau = 0.0;

  bool has_noise = false;
  double fine_dt = 0.0;
  std::vector<double> noise_increments;  // (n*refinement) x d

  bool has_jump_log = false;
  std::vector<std::vector<JumpRecordObs>> jumps;  // n observation buckets

  int n_intervals() const { return static_cast<int>(times.size()) - 1; }
  /// Max logged jump magnitude in observation interval k (0 when none).
  double max_jump_magnitude(int k) const;
};

struct SimulateOptions {
  int refinement = 10;
  bool jump_log = false;
  bool keep_noise = false;
};

/// Euler scheme on the refined grid (n * refinement steps), subsampled to n
/// observations: X_{t_k} = X_{t_{k-1}} + b(X_{t_{k-1}}, theta0) dt + eps * dQ.
SamplePath simulate(const ModelSpec& model, std::span<const double> theta0,
                    std::span<const double> x0, double epsilon, int n,
                    const LevySpec& spec, double tau, Rng& rng,
                    const SimulateOptions& opt = {});

struct RescaledData {
  std::vector<double> times;   // s_k = t_k / T in [0,1]
  std::vector<double> states;  // Y = X / T
  int d = 0;
  double epsilon = 0.0;  // T^{1/alpha - 1}
  double horizon = 0.0;  // T
};

/// Long-horizon observations on [0,T] rescaled to a small-noise model on [0,1];
/// the drift convention for the rescaled model is b~(y, theta) = b(T y, theta).
RescaledData rescale_longterm(const std::vector<double>& times,
                              const std::vector<double>& states, int d,
                              double alpha);

}  // namespace levydrift
