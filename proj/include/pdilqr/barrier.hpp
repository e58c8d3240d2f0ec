#pragma once

namespace pdilqr {

// Relaxed log barrier for a constraint xi >= 0:
//   B = -mu ln(xi)                                        xi >= delta
//   B = mu/2 (((xi - 2 delta) / delta)^2 - 1) - mu ln(delta)   xi < delta
// C1 at xi = delta and defined for every real xi.

double barrier_value(double xi, double mu, double delta);
double barrier_grad(double xi, double mu, double delta);
double barrier_hess(double xi, double mu, double delta);

}  // namespace pdilqr
