#pragma once

#include <vector>

namespace levydrift {

/// Solve A x = b for a small dense p x p system (Gaussian elimination with
/// partial pivoting). Returns false when A is numerically singular.
bool solve_small(std::vector<double> a, std::vector<double> b, int p,
                 std::vector<double>& x);

/// Inverse of a small dense p x p matrix; throws on singular input.
std::vector<double> invert_small(const std::vector<double>& a, int p);

/// Eigenvalues of a small symmetric matrix via cyclic Jacobi rotations.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int p);

}  // namespace levydrift
