#pragma once

// Dense primal-dual KKT assembly of the LQ subproblem. Desk-scale only; used
// as ground truth for the structured backends.
//
// Unknowns are ordered [dx_0 .. dx_{N+1}, du_0 .. du_N, lambda_0 .. lambda_{N+1}]
// and constraints are written c(z) = 0 with Lagrangian f + lambda'c, where
//   c_0     = dx0 - dx_0
//   c_{i+1} = A_i dx_i + B_i du_i + b_i - dx_{i+1}.
// With that convention lambda_i = P_i dx_i + p_i.

#include "pdilqr/types.hpp"

namespace pdilqr {

struct DenseKKT {
  Matrix M;
  Vector rhs;
  int horizon = 0;
  int nx = 0;
  int nu = 0;

  int dim() const { return static_cast<int>(rhs.size()); }
  int state_offset(int node) const { return node * nx; }
  int control_offset(int node) const { return (horizon + 2) * nx + node * nu; }
  int multiplier_offset(int node) const { return (horizon + 2) * nx + (horizon + 1) * nu + node * nx; }
};

inline constexpr int kMaxDenseKKTDim = 20000;

/// Throws std::invalid_argument when the flat dimension exceeds kMaxDenseKKTDim.
DenseKKT assemble_kkt(const QPData& qp);

/// Solves the assembled system with a partially pivoted LU factorization.
/// Throws SolverError when singular.
Direction solve_kkt_dense(const QPData& qp);

/// ||M z - rhs||_inf for a direction laid out per DenseKKT.
double kkt_residual(const DenseKKT& kkt, const Direction& dir);

}  // namespace pdilqr
