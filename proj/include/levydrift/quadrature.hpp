#pragma once

#include <functional>

namespace levydrift::quad {

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_depth = 50;
};

/// Adaptive 7/15 Gauss-Kronrod on a finite interval [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opt = {});

/// Adaptive integral over [a, +inf), mapped through z = a + t/(1-t).
double integrate_upper(const std::function<double(double)>& f, double a,
                       const Options& opt = {});

}  // namespace levydrift::quad
