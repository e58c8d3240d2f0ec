#include "pdilqr/models/integrators.hpp"

#include <stdexcept>

namespace pdilqr::models {

DynamicsEval rk4_step(const ContinuousDynamics& f, const Vector& x, const Vector& u, double dt, bool jacobians) {
  const auto n = x.size();
  const auto m = u.size();
  DynamicsEval out;
  if (!jacobians) {
    const Vector k1 = f(x, u, false).xdot;
    const Vector k2 = f(x + 0.5 * dt * k1, u, false).xdot;
    const Vector k3 = f(x + 0.5 * dt * k2, u, false).xdot;
    const Vector k4 = f(x + dt * k3, u, false).xdot;
    out.next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return out;
  }

  const Matrix I = Matrix::Identity(n, n);
  const ContinuousEval e1 = f(x, u, true);
  const Matrix& k1x = e1.dx;
  const Matrix& k1u = e1.du;

  const ContinuousEval e2 = f(x + 0.5 * dt * e1.xdot, u, true);
  const Matrix k2x = e2.dx * (I + 0.5 * dt * k1x);
  const Matrix k2u = e2.dx * (0.5 * dt * k1u) + e2.du;

  const ContinuousEval e3 = f(x + 0.5 * dt * e2.xdot, u, true);
  const Matrix k3x = e3.dx * (I + 0.5 * dt * k2x);
  const Matrix k3u = e3.dx * (0.5 * dt * k2u) + e3.du;

  const ContinuousEval e4 = f(x + dt * e3.xdot, u, true);
  const Matrix k4x = e4.dx * (I + dt * k3x);
  const Matrix k4u = e4.dx * (dt * k3u) + e4.du;

  out.next = x + (dt / 6.0) * (e1.xdot + 2.0 * e2.xdot + 2.0 * e3.xdot + e4.xdot);
  out.A = I + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  out.B = (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
  if (out.B.cols() != m) out.B.resize(n, m);
  return out;
}

std::function<DynamicsEval(int, const Vector&, const Vector&, bool)> discretize_rk4(ContinuousDynamics f,
                                                                                    double dt) {
  if (dt < 0.0) throw std::invalid_argument("discretize_rk4: negative time step");
  return [f = std::move(f), dt](int, const Vector& x, const Vector& u, bool jac) { return rk4_step(f, x, u, dt, jac); };
}

}  // namespace pdilqr::models
