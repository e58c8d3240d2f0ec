#include "pdilqr/models/toy_models.hpp"

#include <cmath>
#include <stdexcept>

#include "pdilqr/models/integrators.hpp"

namespace pdilqr::models {

OCPDef double_integrator_ocp(int horizon, double dt, const Vector& x0, const Vector& x_goal,
                             const DoubleIntegratorWeights& weights) {
  if (dt <= 0.0) throw std::invalid_argument("double_integrator_ocp: dt must be positive");
  if (x0.size() == 0 || x0.size() % 2 != 0 || x_goal.size() != x0.size()) {
    throw std::invalid_argument("double_integrator_ocp: state must be [p; v] with matching goal");
  }
  const int d = static_cast<int>(x0.size()) / 2;
  const int n = 2 * d;

  Matrix A = Matrix::Identity(n, n);
  A.topRightCorner(d, d) = dt * Matrix::Identity(d, d);
  Matrix B = Matrix::Zero(n, d);
  B.bottomRows(d) = dt * Matrix::Identity(d, d);

  OCPDef ocp;
  ocp.horizon = horizon;
  ocp.nx = n;
  ocp.nu = d;
  ocp.x0 = x0;
  ocp.dynamics = [A, B](int, const Vector& x, const Vector& u, bool jac) {
    DynamicsEval e{A * x + B * u, {}, {}};
    if (jac) {
      e.A = A;
      e.B = B;
    }
    return e;
  };
  ocp.stage_residual = [x_goal, n, d](int, const Vector& x, const Vector& u, bool jac) {
    ResidualEval r;
    r.value.resize(n + d);
    r.value << x - x_goal, u;
    if (jac) {
      r.dx = Matrix::Zero(n + d, n);
      r.dx.topRows(n).setIdentity();
      r.du = Matrix::Zero(n + d, d);
      r.du.bottomRows(d).setIdentity();
    }
    return r;
  };
  Vector w(n + d);
  w << Vector::Constant(n, weights.state), Vector::Constant(d, weights.control);
  ocp.stage_weight.assign(horizon + 1, w.asDiagonal().toDenseMatrix());
  ocp.terminal_residual = [x_goal, n](const Vector& x, bool jac) {
    ResidualEval r{x - x_goal, {}, {}};
    if (jac) {
      r.dx = Matrix::Identity(n, n);
      r.du = Matrix::Zero(n, 0);
    }
    return r;
  };
  ocp.terminal_weight = weights.terminal * Matrix::Identity(n, n);
  return ocp;
}

OCPDef pendulum_ocp(int horizon, double dt, const Vector& x0, const PendulumParams& params) {
  if (dt <= 0.0) throw std::invalid_argument("pendulum_ocp: dt must be positive");
  if (x0.size() != 2) throw std::invalid_argument("pendulum_ocp: state is (angle, rate)");

  const double g_over_l = params.gravity / params.length;
  const double inv_inertia = 1.0 / (params.mass * params.length * params.length);
  ContinuousDynamics f = [g_over_l, inv_inertia](const Vector& x, const Vector& u, bool jac) {
    ContinuousEval e;
    e.xdot.resize(2);
    e.xdot << x(1), -g_over_l * std::sin(x(0)) + inv_inertia * u(0);
    if (jac) {
      e.dx.resize(2, 2);
      e.dx << 0.0, 1.0, -g_over_l * std::cos(x(0)), 0.0;
      e.du.resize(2, 1);
      e.du << 0.0, inv_inertia;
    }
    return e;
  };

  OCPDef ocp;
  ocp.horizon = horizon;
  ocp.nx = 2;
  ocp.nu = 1;
  ocp.x0 = x0;
  ocp.dynamics = discretize_rk4(f, dt);

  const double goal = params.goal_angle;
  ocp.stage_residual = [goal](int, const Vector& x, const Vector& u, bool jac) {
    ResidualEval r;
    r.value.resize(3);
    r.value << x(0) - goal, x(1), u(0);
    if (jac) {
      r.dx = Matrix::Zero(3, 2);
      r.dx(0, 0) = 1.0;
      r.dx(1, 1) = 1.0;
      r.du = Matrix::Zero(3, 1);
      r.du(2, 0) = 1.0;
    }
    return r;
  };
  ocp.stage_weight.assign(horizon + 1,
                          Vector(Eigen::Vector3d(params.angle_weight, params.rate_weight, params.torque_weight))
                              .asDiagonal()
                              .toDenseMatrix());
  ocp.terminal_residual = [goal](const Vector& x, bool jac) {
    ResidualEval r;
    r.value.resize(2);
    r.value << x(0) - goal, x(1);
    if (jac) {
      r.dx = Matrix::Identity(2, 2);
      r.du = Matrix::Zero(2, 0);
    }
    return r;
  };
  ocp.terminal_weight = params.terminal_weight * Matrix::Identity(2, 2);

  const double u_max = params.torque_limit;
  const double mu = params.barrier_mu;
  const double delta = params.barrier_delta;
  ocp.stage_constraints = [u_max, mu, delta](int, const Vector&, const Vector& u, bool jac) {
    std::vector<ConstraintEval> cs(2);
    cs[0].value = u_max - u(0);
    cs[1].value = u(0) + u_max;
    for (int j = 0; j < 2; ++j) {
      cs[j].mu = mu;
      cs[j].delta = delta;
      if (jac) {
        cs[j].dx = Vector::Zero(2);
        cs[j].du = Vector::Constant(1, j == 0 ? -1.0 : 1.0);
      }
    }
    return cs;
  };
  return ocp;
}

Trajectory pendulum_guess(const OCPDef& ocp, double dt, const PendulumParams& params) {
  Trajectory t = constant_guess(ocp);
  const int nodes = ocp.horizon + 1;
  const double span = params.goal_angle - ocp.x0(0);
  for (int i = 0; i <= nodes; ++i) {
    t.x[i](0) = ocp.x0(0) + span * i / nodes;
    t.x[i](1) = span / (nodes * dt);
  }
  return t;
}

}  // namespace pdilqr::models
