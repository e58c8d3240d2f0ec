#pragma once

// Small analytic OCPs used to check the solver end to end.

#include "pdilqr/ocp.hpp"

namespace pdilqr::models {

struct DoubleIntegratorWeights {
  double state = 1.0;
  double control = 0.1;
  double terminal = 10.0;
};

/// State [p; v] with p, v in R^d (d = x0.size() / 2), control a in R^d:
/// p+ = p + dt v, v+ = v + dt a. Tracking cost to x_goal plus control effort.
OCPDef double_integrator_ocp(int horizon, double dt, const Vector& x0, const Vector& x_goal,
                             const DoubleIntegratorWeights& weights = {});

struct PendulumParams {
  double mass = 1.0;
  double length = 1.0;
  double gravity = 9.81;
  double torque_limit = 8.0;
  double goal_angle = 3.141592653589793;  // upright
  double angle_weight = 1.0;
  double rate_weight = 0.1;
  double torque_weight = 0.01;
  double terminal_weight = 1e4;
  double barrier_mu = 0.05;
  double barrier_delta = 0.1;
};

/// Pendulum theta'' = -(g/l) sin(theta) + u / (m l^2), RK4-discretized, with
/// relaxed-barrier torque limits u_max - u > 0 and u + u_max > 0.
OCPDef pendulum_ocp(int horizon, double dt, const Vector& x0, const PendulumParams& params = {});

/// Angle interpolated linearly from x0 to the goal at constant rate, zero torque.
Trajectory pendulum_guess(const OCPDef& ocp, double dt, const PendulumParams& params = {});

}  // namespace pdilqr::models
