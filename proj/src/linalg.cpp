#include "levydrift/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levydrift {

bool solve_small(std::vector<double> a, std::vector<double> b, int p,
                 std::vector<double>& x) {
  for (int col = 0; col < p; ++col) {
    int pivot = col;
    for (int r = col + 1; r < p; ++r) {
      if (std::abs(a[r * p + col]) > std::abs(a[pivot * p + col])) pivot = r;
    }
    if (std::abs(a[pivot * p + col]) < 1e-300) return false;
    if (pivot != col) {
      for (int c = 0; c < p; ++c) std::swap(a[col * p + c], a[pivot * p + c]);
      std::swap(b[col], b[pivot]);
    }
    const double diag = a[col * p + col];
    for (int r = col + 1; r < p; ++r) {
      const double f = a[r * p + col] / diag;
      if (f == 0.0) continue;
      for (int c = col; c < p; ++c) a[r * p + c] -= f * a[col * p + c];
      b[r] -= f * b[col];
    }
  }
  x.assign(p, 0.0);
  for (int r = p - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < p; ++c) s -= a[r * p + c] * x[c];
    x[r] = s / a[r * p + r];
  }
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::vector<double> invert_small(const std::vector<double>& a, int p) {
  std::vector<double> inv(static_cast<std::size_t>(p) * p, 0.0);
  for (int col = 0; col < p; ++col) {
    std::vector<double> e(p, 0.0);
    e[col] = 1.0;
    std::vector<double> x;
    if (!solve_small(a, e, p, x)) {
      throw std::runtime_error("invert_small: singular matrix");
    }
    for (int r = 0; r < p; ++r) inv[r * p + col] = x[r];
  }
  return inv;
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a, int p) {
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < p; ++i) {
      for (int j = i + 1; j < p; ++j) off += a[i * p + j] * a[i * p + j];
    }
    if (off < 1e-30) break;
    for (int i = 0; i < p; ++i) {
      for (int j = i + 1; j < p; ++j) {
        const double apq = a[i * p + j];
        if (std::abs(apq) < 1e-300) continue;
        const double app = a[i * p + i];
        const double aqq = a[j * p + j];
        const double theta = 0.5 * (aqq - app) / apq;
        const double t = ((theta >= 0.0) ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < p; ++k) {
          const double aki = a[k * p + i];
          const double akj = a[k * p + j];
          a[k * p + i] = c * aki - s * akj;
          a[k * p + j] = s * aki + c * akj;
        }
        for (int k = 0; k < p; ++k) {
          const double aik = a[i * p + k];
          const double ajk = a[j * p + k];
          a[i * p + k] = c * aik - s * ajk;
          a[j * p + k] = s * aik + c * ajk;
        }
      }
    }
  }
  std::vector<double> eig(p);
  for (int i = 0; i < p; ++i) eig[i] = a[i * p + i];
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace levydrift
