#pragma once

#include <functional>
#include <vector>

#include "pdilqr/types.hpp"

namespace pdilqr {

/// h_i(x, u) and, when requested, its Jacobians A = dh/dx, B = dh/du.
struct DynamicsEval {
  Vector next;
  Matrix A;
  Matrix B;
};

/// Least-squares residual eps(x, u) with Jacobians. For terminal residuals
/// `du` has zero columns.
struct ResidualEval {
  Vector value;
  Matrix dx;
  Matrix du;
};

/// One scalar inequality xi(x, u) > 0 handled by the relaxed barrier.
struct ConstraintEval {
  double value = 0.0;
  Vector dx;
  Vector du;
  double mu = 1.0;
  double delta = 0.1;
};

/// Multiple-shooting OCP over nodes 0..N plus terminal node N+1:
///   min  sum_i 1/2 |eps_i(x_i, u_i)|^2_{W_i} + B(xi_i) + 1/2 |eps_T(x_{N+1})|^2_{W_T} + B(xi_T)
///   s.t. x_0 = x0,  x_{i+1} = h_i(x_i, u_i)
struct OCPDef {
  int horizon = 0;
  int nx = 0;
  int nu = 0;
  Vector x0;

  std::function<DynamicsEval(int node, const Vector& x, const Vector& u, bool jacobians)> dynamics;

  std::function<ResidualEval(int node, const Vector& x, const Vector& u, bool jacobians)> stage_residual;
  std::vector<Matrix> stage_weight;  // N+1 entries

  std::function<ResidualEval(const Vector& x, bool jacobians)> terminal_residual;
  Matrix terminal_weight;

  // Optional.
  std::function<std::vector<ConstraintEval>(int node, const Vector& x, const Vector& u, bool jacobians)>
      stage_constraints;
  std::function<std::vector<ConstraintEval>(const Vector& x, bool jacobians)> terminal_constraints;

  /// Throws std::invalid_argument on missing callbacks or bad weights.
  void validate() const;
};

struct Trajectory {
  std::vector<Vector> x;       // N+2
  std::vector<Vector> u;       // N+1
  std::vector<Vector> lambda;  // N+2

  int horizon() const { return static_cast<int>(u.size()) - 1; }
  bool all_finite() const;
};

/// x_i = x0 for all nodes, u = 0, lambda = 0.
Trajectory constant_guess(const OCPDef& ocp);

/// Nonlinear rollout of the given controls from ocp.x0; lambda = 0.
Trajectory rollout(const OCPDef& ocp, const std::vector<Vector>& controls);

/// x_i <- x_{i+1}, u_i <- u_{i+1}, lambda_i <- lambda_{i+1}; last entries repeat.
Trajectory warm_start_shift(const Trajectory& traj);

}  // namespace pdilqr
