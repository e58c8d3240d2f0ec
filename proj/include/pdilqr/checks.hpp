#pragma once

// Comparison and finite-difference helpers shared by the verify command and
// the test suites.

#include <functional>

#include "pdilqr/scan_lqr.hpp"
#include "pdilqr/types.hpp"

namespace pdilqr {

/// Largest relative deviation over dx, du and dlambda.
double direction_deviation(const Direction& a, const Direction& ref);

/// max|a - b| over all fields divided by max|b| (absolute when b vanishes).
double element_deviation(const ValueElement& a, const ValueElement& ref);
double element_deviation(const TrajElement& a, const TrajElement& ref);

/// Central finite-difference Jacobian of f at x.
Matrix central_difference(const std::function<Vector(const Vector&)>& f, const Vector& x, double h = 1e-6);

/// max|analytic - central differences| for d f/dx and d f/du.
double jacobian_error(const std::function<Vector(const Vector&, const Vector&)>& f, const Vector& x,
                      const Vector& u, const Matrix& dx, const Matrix& du, double h = 1e-6);

/// Smallest eigenvalue of the symmetric part of M (+inf for empty M).
double min_eigenvalue(const Matrix& M);

}  // namespace pdilqr
