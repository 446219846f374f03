#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "levydrift/levy.hpp"
#include "levydrift/model.hpp"
#include "levydrift/sde.hpp"

namespace levydrift {

/// Threshold rule delta_{n,eps} for the increment filter 1{|dX_k| <= delta}.
/// With ideal = true the filter instead reads the jump log:
/// 1{eps * max logged jump magnitude in interval k <= delta}.
struct ThresholdRule {
  enum class Kind { None, ConstTimesEps, PowerLaw, Fixed };
  Kind kind = Kind::None;
  bool ideal = false;
  double c = 1.0;      // ConstTimesEps / PowerLaw multiplier
  double rho_e = 1.0;  // PowerLaw: delta = c * eps^rho_e * n^{-rho_n}
  double rho_n = 0.0;
  double value = 0.0;  // Fixed

  double delta(int n, double eps) const;
  std::string label() const;

  static ThresholdRule none();
  static ThresholdRule const_times_eps(double c, bool ideal = false);
  static ThresholdRule power(double c, double rho_e, double rho_n,
                             bool ideal = false);
  static ThresholdRule fixed(double value, bool ideal = false);
  /// Grammar: none | const:c | power:c,re,rn | fixed:v | ideal:c.
  static ThresholdRule parse(const std::string& text);
};

class EstimationError : public std::runtime_error {
 public:
  enum class Kind { FilterStarved, NoConvergence, BadInput };
  EstimationError(Kind k, const std::string& msg)
      : std::runtime_error(msg), kind(k) {}
  Kind kind;
};

enum class OptStatus { Converged, BoundaryHit, Bisection, MaxIter };
std::string to_string(OptStatus s);

struct EstimationResult {
  std::vector<double> theta_hat;
  std::vector<double> normalized_error;        // eps^{-1}(theta_hat - theta0)
  std::vector<double> normalized_error_sigma;  // (sigma(delta/eps) eps)^{-1}(...)
  long retained = 0;
  double retained_fraction = 0.0;
  OptStatus status = OptStatus::Converged;
  double objective = 0.0;
  double delta_used = 0.0;
  bool closed_form_fallback = false;
};

struct OptimizerSettings {
  double grad_tol = 1e-10;  // stop at |G| < grad_tol * (1 + |Phi|)
  double step_tol = 1e-12;
  int max_iter = 100;
  int starts_per_axis = 3;
};

/// Psi_{n,eps}(theta) = eps^{-2} Dn^{-1} sum_k |dX_k - b(X_{t_{k-1}},theta) Dn|^2.
double contrast_lse(const SamplePath& path, const ModelSpec& model,
                    std::span<const double> theta);
/// Phi_{n,eps}: the same sum restricted to |dX_k| <= delta (Euclidean norm).
double contrast_threshold(const SamplePath& path, const ModelSpec& model,
                          std::span<const double> theta, double delta);
/// The jump-observed contrast: restricted to eps * max logged jump <= delta.
double contrast_ideal(const SamplePath& path, const ModelSpec& model,
                      std::span<const double> theta, double delta);

/// G(theta) = 2^{-1} grad Phi = -eps^{-2} sum grad_theta b_{k-1}[chi_k] 1{filter}.
std::vector<double> gradient(const SamplePath& path, const ModelSpec& model,
                             std::span<const double> theta,
                             const ThresholdRule& rule);
/// K(theta) = 2^{-1} hess Phi (p x p row-major, symmetric).
std::vector<double> hessian(const SamplePath& path, const ModelSpec& model,
                            std::span<const double> theta,
                            const ThresholdRule& rule);

/// Minimum-contrast estimator over the box Theta: multi-start damped Newton
/// with box clamping, coordinate-bisection fallback on stalls.
EstimationResult estimate(const SamplePath& path, const ModelSpec& model,
                          const ThresholdRule& rule,
                          const OptimizerSettings& settings = {});

/// The closed-form solver for the example2d model: theta1 by safeguarded root
/// finding of the filtered score equation, theta2 by the explicit ratio.
EstimationResult estimate_example2d_closed_form(
    const SamplePath& path, const ModelSpec& model, const ThresholdRule& rule,
    const OptimizerSettings& settings = {});

/// Fill normalized_error_sigma with (sigma(delta/eps) * eps)^{-1}(theta - theta0),
/// the infinite-activity normalization; sigma^2 totals over coordinates.
void apply_sigma_normalization(EstimationResult& result, const LevySpec& spec,
                               double eps, std::span<const double> theta0);

/// zeta = I(theta0)^{-1} sum_j grad_theta b(X0_{t_{j-1}}, theta0)[dQ_j]:
/// the pathwise limit of the normalized error on the same noise stream.
std::vector<double> zeta_oracle(const ModelSpec& model,
                                std::span<const double> theta0,
                                const OdeSolution& ode_fine,
                                const std::vector<double>& noise_increments,
                                double fine_dt);

struct RegimeDiagnostics {
  double delta = 0.0;
  double n_delta = 0.0;                // n * delta
  double diag_n14 = 0.0;               // delta * eps^{-1} * n^{1/4}
  double delta_over_dn = 0.0;          // delta / Delta_n
  double eps_dngamma_over_delta = 0.0; // eps * Delta_n^gamma / delta
  double delta_over_eps = 0.0;
  double lambda_over_nlogn = 0.0;      // lambda(delta/eps) / (n log n)
  double n_eps_dngamma = 0.0;          // n * eps * Delta_n^gamma
  double sigma_rho_logn = 0.0;         // sigma^rho(delta/eps) * log n
  double n_eps_sigma = 0.0;            // n * eps * sigma(delta/eps)
  double ar_ratio = 0.0;               // (delta/eps)^{-1} sigma(delta/eps)
};

RegimeDiagnostics regime_diagnostics(int n, double eps, const ThresholdRule& rule,
                                     const LevySpec& spec, double gamma,
                                     double rho);

}  // namespace levydrift
