#include "pdilqr/barrier.hpp"

#include <cmath>

namespace pdilqr {

double barrier_value(double xi, double mu, double delta) {
  if (xi >= delta) return -mu * std::log(xi);
  const double z = (xi - 2.0 * delta) / delta;
  return 0.5 * mu * (z * z - 1.0) - mu * std::log(delta);
}

double barrier_grad(double xi, double mu, double delta) {
  if (xi >= delta) return -mu / xi;
  return mu * (xi - 2.0 * delta) / (delta * delta);
}

double barrier_hess(double xi, double mu, double delta) {
  if (xi >= delta) return mu / (xi * xi);
  return mu / (delta * delta);
}

}  // namespace pdilqr
