#pragma once

#include <functional>

#include "pdilqr/ocp.hpp"

namespace pdilqr::models {

/// xdot = f(x, u) with Jacobians when requested.
struct ContinuousEval {
  Vector xdot;
  Matrix dx;
  Matrix du;
};

using ContinuousDynamics = std::function<ContinuousEval(const Vector& x, const Vector& u, bool jacobians)>;

/// One classical RK4 step; Jacobians are propagated through the four stages
/// by the chain rule.
DynamicsEval rk4_step(const ContinuousDynamics& f, const Vector& x, const Vector& u, double dt, bool jacobians);

/// Node-independent discrete map built from rk4_step. Throws on dt < 0.
std::function<DynamicsEval(int, const Vector&, const Vector&, bool)> discretize_rk4(ContinuousDynamics f,
                                                                                    double dt);

}  // namespace pdilqr::models
