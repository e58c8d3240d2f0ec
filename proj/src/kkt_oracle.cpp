#include "pdilqr/kkt_oracle.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace pdilqr {

DenseKKT assemble_kkt(const QPData& qp) {
  qp.check_dimensions();
  DenseKKT kkt;
  kkt.horizon = qp.horizon();
  kkt.nx = qp.nx();
  kkt.nu = qp.nu();
  const int N = kkt.horizon;
  const int n = kkt.nx;
  const int m = kkt.nu;
  const long d = 2L * (N + 2) * n + static_cast<long>(N + 1) * m;
  if (d > kMaxDenseKKTDim) {
    throw std::invalid_argument("assemble_kkt: dimension " + std::to_string(d) + " exceeds oracle limit");
  }
  kkt.M = Matrix::Zero(d, d);
  kkt.rhs = Vector::Zero(d);
  auto& M = kkt.M;

  // Hessian and gradient rows.
  for (int i = 0; i <= N; ++i) {
    const int xo = kkt.state_offset(i);
    const int uo = kkt.control_offset(i);
    M.block(xo, xo, n, n) = qp.Q[i];
    M.block(uo, uo, m, m) = qp.R[i];
    M.block(uo, xo, m, n) = qp.S[i];
    M.block(xo, uo, n, m) = qp.S[i].transpose();
    kkt.rhs.segment(xo, n) = -qp.q[i];
    kkt.rhs.segment(uo, m) = -qp.r[i];
  }
  const int xT = kkt.state_offset(N + 1);
  M.block(xT, xT, n, n) = qp.P_terminal;
  kkt.rhs.segment(xT, n) = -qp.p_terminal;

  // Constraint Jacobian J (rows at multiplier offsets) and its transpose.
  const Matrix I = Matrix::Identity(n, n);
  auto put = [&](int row, int col, const Matrix& blk) {
    M.block(row, col, blk.rows(), blk.cols()) = blk;
    M.block(col, row, blk.cols(), blk.rows()) = blk.transpose();
  };
  const int l0 = kkt.multiplier_offset(0);
  put(l0, kkt.state_offset(0), -I);
  kkt.rhs.segment(l0, n) = -qp.dx0;
  for (int i = 0; i <= N; ++i) {
    const int li = kkt.multiplier_offset(i + 1);
    put(li, kkt.state_offset(i), qp.A[i]);
    put(li, kkt.control_offset(i), qp.B[i]);
    put(li, kkt.state_offset(i + 1), -I);
    kkt.rhs.segment(li, n) = -qp.b[i];
  }
  return kkt;
}

namespace {

Vector flatten(const DenseKKT& kkt, const Direction& dir) {
  Vector z(kkt.dim());
  for (int i = 0; i <= kkt.horizon + 1; ++i) {
    z.segment(kkt.state_offset(i), kkt.nx) = dir.dx[i];
    z.segment(kkt.multiplier_offset(i), kkt.nx) = dir.dlambda[i];
  }
  for (int i = 0; i <= kkt.horizon; ++i) z.segment(kkt.control_offset(i), kkt.nu) = dir.du[i];
  return z;
}

}  // namespace

Direction solve_kkt_dense(const QPData& qp) {
  DenseKKT kkt = assemble_kkt(qp);
  Eigen::PartialPivLU<Matrix> lu(kkt.M);
  // rcond() alone misses exact zero pivots
  const Vector pivots = lu.matrixLU().diagonal().cwiseAbs();
  if (!(pivots.minCoeff() > 1e-14 * std::max(1.0, pivots.maxCoeff())) || !(lu.rcond() > 1e-14))
    throw SolverError("solve_kkt_dense: singular KKT matrix");
  const Vector z = lu.solve(kkt.rhs);
  if (!z.allFinite()) throw SolverError("solve_kkt_dense: non-finite solution (near-singular KKT)");

  Direction dir;
  const int N = kkt.horizon;
  dir.dx.resize(N + 2);
  dir.dlambda.resize(N + 2);
  dir.du.resize(N + 1);
  for (int i = 0; i <= N + 1; ++i) {
    dir.dx[i] = z.segment(kkt.state_offset(i), kkt.nx);
    dir.dlambda[i] = z.segment(kkt.multiplier_offset(i), kkt.nx);
  }
  for (int i = 0; i <= N; ++i) dir.du[i] = z.segment(kkt.control_offset(i), kkt.nu);
  return dir;
}

double kkt_residual(const DenseKKT& kkt, const Direction& dir) {
  return (kkt.M * flatten(kkt, dir) - kkt.rhs).cwiseAbs().maxCoeff();
}

}  // namespace pdilqr
