#pragma once

// LQ subproblem solved by associative scans.
//
// Backward pass: each node contributes a conditional value function
//   V_{i->j}(x_i, x_j) = max_eta 1/2 x_i'P x_i + p'x_i - 1/2 eta'C eta
//                                - eta'(x_j - A x_i - b)
// and the reverse scan of these elements under min-over-the-shared-state
// yields the cost-to-go (P_i, p_i) at every node.
//
// Forward pass: each node contributes the closed-loop affine map
//   dx_{i+1} = Abar_i dx_i + bbar_i
// and a forward scan of their compositions yields the state trajectory.

#include <optional>

#include "pdilqr/scan_engine.hpp"
#include "pdilqr/types.hpp"

namespace pdilqr {

struct ValueElement {
  Matrix A;  // transition
  Matrix P;  // quadratic cost on the entry state
  Matrix C;  // coupling covariance of the exit state
  Vector p;  // linear cost on the entry state
  Vector b;  // transition offset

  static ValueElement identity(int n);
};

struct TrajElement {
  Matrix A;
  Vector b;

  static TrajElement identity(int n);
};

struct ScanSettings {
  ScanMode mode = ScanMode::tree;
  int workers = 1;
  // Negative control for the verification suite: perturbs every combine.
  bool corrupt_combine = false;
};

/// Stage element V_{i->i+1} of node i. Throws SolverError when R_i is singular.
ValueElement stage_value_element(const QPData& qp, int node);

/// Terminal element (A = 0, C = 0, b = 0, P = P_{N+1}, p = p_{N+1}).
ValueElement terminal_value_element(const QPData& qp);

/// N+1 elements: stage elements for nodes 0..N-1 and, last, node N's stage
/// element already combined with the terminal element. The last element
/// therefore has the terminal form (A = 0, C = 0, b = 0).
std::vector<ValueElement> init_value_elements(const QPData& qp);

/// V_{i->k} (x) V_{k->j}. Throws SolverError when I + C_ik P_kj is singular.
ValueElement combine(const ValueElement& ik, const ValueElement& kj);

/// Reverse scan for (P_i, p_i), then per-node K_i, k_i. `depth` receives the
/// scan's stage count when non-null.
Policy backward_scan(const QPData& qp, const ScanSettings& settings = {}, int* depth = nullptr);

/// Closed-loop maps; node 0 absorbs the initial condition (A = 0).
std::vector<TrajElement> init_traj_elements(const QPData& qp, const Policy& policy);

/// Affine composition dx_j = A_kj (A_ik dx_i + b_ik) + b_kj.
TrajElement combine_traj(const TrajElement& ik, const TrajElement& kj);

/// Forward scan for dx_1..dx_{N+1}; du_i = K_i dx_i + k_i per node.
Direction forward_scan(const QPData& qp, const Policy& policy, const ScanSettings& settings = {},
                       int* depth = nullptr);

/// backward_scan + forward_scan + dual_update.
Direction solve_lqr_scan(const QPData& qp, const ScanSettings& settings = {},
                         int* backward_depth = nullptr, int* forward_depth = nullptr);

}  // namespace pdilqr
