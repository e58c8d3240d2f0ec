#pragma once

// Multiple-shooting Gauss-Newton SQP with relaxed barriers, an LQ subproblem
// solved by either backend, and a filter line search over a fixed step grid.

#include <array>
#include <string>

#include "pdilqr/ocp.hpp"
#include "pdilqr/scan_lqr.hpp"

namespace pdilqr {

enum class Backend { sequential, scan };

struct SolverOptions {
  Backend backend = Backend::sequential;
  ScanSettings scan;
  int workers = 1;  // node-parallel linearization and line search
  double armijo_c1 = 1e-4;
  double theta_max_per_node = 1e-2;  // theta_max = this * (N + 1)
  double reg_initial = 1e-6;
  double reg_growth = 10.0;
  double reg_max = 1e-2;
};

/// Step grid 2^0, 2^-1, ..., 2^-9.
inline constexpr int kLineSearchSteps = 10;
std::array<double, kLineSearchSteps> step_grid();

/// Objective including barrier terms.
double evaluate_cost(const OCPDef& ocp, const Trajectory& traj, int workers = 1);

/// sum_{i=0..N} |x_{i+1} - h_i(x_i, u_i)|_2 + |x0 - x_0|_2.
double constraint_violation(const OCPDef& ocp, const Trajectory& traj, int workers = 1);

struct Linearization {
  QPData qp;
  std::vector<Vector> cost_grad_x;  // N+2, objective gradient without multiplier terms
  std::vector<Vector> cost_grad_u;  // N+1
  double cost = 0.0;
  double theta = 0.0;
};

/// Gauss-Newton QP at `traj`; q, r, p_T are Lagrangian gradients. Throws
/// SolverError naming node and term on non-finite evaluations.
Linearization linearize(const OCPDef& ocp, const Trajectory& traj, int workers = 1);

/// traj + alpha * dir for x, u and lambda.
Trajectory apply_step(const Trajectory& traj, const Direction& dir, double alpha);

/// Reference point of the filter test.
struct FilterReference {
  double cost = 0.0;
  double theta = 0.0;
  double directional_derivative = 0.0;  // <grad cost, dir>
  double theta_max = 0.0;
  double armijo_c1 = 1e-4;
};

enum class AcceptRule { none, theta_decrease, armijo, cost_or_theta, zero_step };
const char* to_string(AcceptRule rule);

/// Which rule (if any) accepts a candidate with the given cost and theta.
AcceptRule filter_accepts(const FilterReference& ref, double alpha, double cost, double theta);

struct Candidate {
  double alpha = 0.0;
  double cost = 0.0;
  double theta = 0.0;
};

/// Index of the largest accepted alpha among `candidates` (any order), or -1.
int select_step(const FilterReference& ref, const std::vector<Candidate>& candidates);

struct LineSearchResult {
  double alpha = 0.0;
  Trajectory traj;
  bool accepted = false;
  AcceptRule rule = AcceptRule::none;
  double cost = 0.0;
  double theta = 0.0;
};

/// Evaluates all grid candidates (concurrently with `options.workers`) and
/// keeps the largest accepted one. On rejection alpha = 0 and traj is unchanged.
LineSearchResult filter_line_search(const OCPDef& ocp, const Trajectory& traj, const Direction& dir,
                                    const Linearization& lin, const SolverOptions& options);

/// Solves the LQ subproblem with the selected backend.
Direction solve_qp(const QPData& qp, const SolverOptions& options, int* scan_depth = nullptr);

struct IterationStats {
  double cost = 0.0;       // at the linearization point
  double theta = 0.0;
  double alpha = 0.0;
  bool qp_solved = false;
  bool accepted = false;
  AcceptRule rule = AcceptRule::none;
  double cost_new = 0.0;   // at the returned iterate
  double theta_new = 0.0;
  double regularization = 0.0;
  double direction_norm = 0.0;
  double directional_derivative = 0.0;
  int scan_depth = 0;
  double linearize_seconds = 0.0;
  double qp_seconds = 0.0;
  double line_search_seconds = 0.0;
};

struct SolveStats {
  std::vector<IterationStats> iterations;
  bool converged = false;
};

struct IterateResult {
  Trajectory traj;
  IterationStats stats;
  Direction direction;
};

/// linearize -> QP solve -> dual update -> filter line search, with
/// Levenberg-Marquardt retries on factorization failure or full rejection.
IterateResult sqp_iterate(const OCPDef& ocp, const Trajectory& traj, const SolverOptions& options);

struct SolveResult {
  Trajectory traj;
  SolveStats stats;
};

/// Iterates until theta <= tol and the QP direction's max-norm <= tol (the
/// check-only QP solve is not counted as an iteration), until a step is
/// rejected, or until max_iters steps.
SolveResult solve(const OCPDef& ocp, const Trajectory& initial, int max_iters, double tol,
                  const SolverOptions& options);

}  // namespace pdilqr
