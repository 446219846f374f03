#include "levydrift/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levydrift {

void ModelSpec::validate() const {
  if (d < 1 || p < 1) throw std::invalid_argument("ModelSpec: d and p must be >= 1");
  if (static_cast<int>(theta_lo.size()) != p ||
      static_cast<int>(theta_hi.size()) != p) {
    throw std::invalid_argument("ModelSpec: theta box size must equal p");
  }
  for (int i = 0; i < p; ++i) {
    if (!(theta_lo[i] < theta_hi[i])) {
      throw std::invalid_argument("ModelSpec: theta box must have lo < hi");
    }
  }
  if (!drift || !grad_theta || !hess_theta) {
    throw std::invalid_argument("ModelSpec: drift and derivatives must be set");
  }
}

bool ModelSpec::in_box(std::span<const double> theta) const {
  for (int i = 0; i < p; ++i) {
    if (theta[i] < theta_lo[i] || theta[i] > theta_hi[i]) return false;
  }
  return true;
}

std::vector<double> ModelSpec::clamp_to_box(std::span<const double> theta) const {
  std::vector<double> out(theta.begin(), theta.end());
  for (int i = 0; i < p; ++i) {
    out[i] = std::clamp(out[i], theta_lo[i], theta_hi[i]);
  }
  return out;
}

ModelSpec make_linear1d() {
  ModelSpec m;
  m.id = "linear1d";
  m.d = 1;
  m.p = 1;
  m.theta_lo = {-10.0};
  m.theta_hi = {10.0};
  m.drift = [](std::span<const double> x, std::span<const double> th,
               std::span<double> out) { out[0] = -th[0] * x[0]; };
  m.grad_theta = [](std::span<const double> x, std::span<const double>,
                    std::span<double> out) { out[0] = -x[0]; };
  m.hess_theta = [](std::span<const double>, std::span<const double>,
                    std::span<double> out) { out[0] = 0.0; };
  return m;
}

ModelSpec make_example2d(double theta1_min) {
  if (!(theta1_min > 0.0)) {
    throw std::invalid_argument("example2d: theta1_min must be > 0");
  }
  ModelSpec m;
  m.id = "example2d";
  m.d = 2;
  m.p = 2;
  m.theta_lo = {theta1_min, -10.0};
  m.theta_hi = {10.0, 10.0};
  m.drift = [](std::span<const double> x, std::span<const double> th,
               std::span<double> out) {
    const double s = x[0] * x[0] + x[1] * x[1];
    out[0] = std::sqrt(th[0] + s);
    out[1] = -th[1] * x[1] / std::sqrt(1.0 + s);
  };
  m.grad_theta = [](std::span<const double> x, std::span<const double> th,
                    std::span<double> out) {
    const double s = x[0] * x[0] + x[1] * x[1];
    // rows: theta_i, cols: drift coordinate
    out[0] = 0.5 / std::sqrt(th[0] + s);  // d b1 / d th1
    out[1] = 0.0;                         // d b2 / d th1
    out[2] = 0.0;                         // d b1 / d th2
    out[3] = -x[1] / std::sqrt(1.0 + s);  // d b2 / d th2
  };
  m.hess_theta = [](std::span<const double> x, std::span<const double> th,
                    std::span<double> out) {
    const double s = x[0] * x[0] + x[1] * x[1];
    std::fill(out.begin(), out.end(), 0.0);
    // only d^2 b1 / d th1^2 is nonzero
    out[0] = -0.25 * std::pow(th[0] + s, -1.5);
  };
  return m;
}

ModelSpec model_by_id(const std::string& id) {
  if (id == "linear1d") return make_linear1d();
  if (id == "example2d") return make_example2d();
  throw std::invalid_argument("unknown model id: " + id);
}

}  // namespace levydrift
