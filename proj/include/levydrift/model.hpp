#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace levydrift {

/// Parametric drift model b(x, theta) with analytic theta-derivatives.
/// grad_theta is stored row-major p x d: grad[i*d + c] = d b_c / d theta_i.
/// hess_theta is p x p x d: hess[(i*p + j)*d + c] = d^2 b_c / d theta_i d theta_j.
struct ModelSpec {
  std::string id;
  int d = 0;
  int p = 0;
  std::vector<double> theta_lo;
  std::vector<double> theta_hi;

  using DriftFn = std::function<void(std::span<const double>, std::span<const double>,
                                     std::span<double>)>;
  DriftFn drift;
  DriftFn grad_theta;
  DriftFn hess_theta;

  void validate() const;
  bool in_box(std::span<const double> theta) const;
  std::vector<double> clamp_to_box(std::span<const double> theta) const;
};

/// b(x, theta) = -theta * x, d = p = 1.
ModelSpec make_linear1d();

/// The two-dimensional drift (sqrt(theta1 + x1^2 + x2^2),
/// -theta2 x2 / sqrt(1 + x1^2 + x2^2)). theta1 is kept >= theta1_min so the
/// square root stays real over the box.
ModelSpec make_example2d(double theta1_min = 0.01);

/// Registry lookup by id ("linear1d", "example2d"); throws on unknown ids.
ModelSpec model_by_id(const std::string& id);

}  // namespace levydrift
