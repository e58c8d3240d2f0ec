#pragma once

// Serial reference kernels for the LQ subproblem: Riccati backward pass,
// closed-loop forward rollout and the costate update. These are the ground
// truth the scan backend is checked against.

#include "pdilqr/types.hpp"

namespace pdilqr {

/// Backward Riccati recursion from the terminal node. Throws SolverError
/// naming the node when R_i + B_i' P_{i+1} B_i is not positive definite.
Policy riccati_backward(const QPData& qp);

/// du_i = K_i dx_i + k_i, dx_{i+1} = A_i dx_i + B_i du_i + b_i from dx_0 = qp.dx0.
/// Fills dx and du; dlambda is left empty.
Direction forward_rollout(const QPData& qp, const Policy& policy);

/// dlambda_i = P_i dx_i + p_i for every node including 0 and N+1.
std::vector<Vector> dual_update(const Policy& policy, const std::vector<Vector>& dx);

/// riccati_backward + forward_rollout + dual_update.
Direction solve_lqr_sequential(const QPData& qp);

}  // namespace pdilqr
