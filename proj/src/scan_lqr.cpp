#include "pdilqr/scan_lqr.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "pdilqr/lqr_kernels.hpp"

namespace pdilqr {

namespace {

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

ValueElement ValueElement::identity(int n) {
  return {Matrix::Identity(n, n), Matrix::Zero(n, n), Matrix::Zero(n, n), Vector::Zero(n), Vector::Zero(n)};
}

TrajElement TrajElement::identity(int n) { return {Matrix::Identity(n, n), Vector::Zero(n)}; }

ValueElement stage_value_element(const QPData& qp, int i) {
  Eigen::LLT<Matrix> llt(qp.R[i]);
  if (llt.info() != Eigen::Success) {
    throw SolverError("stage_value_element: R not positive definite at node " + std::to_string(i), i);
  }
  const Matrix Rinv_S = llt.solve(qp.S[i]);
  const Matrix Rinv_Bt = llt.solve(qp.B[i].transpose());
  const Vector Rinv_r = llt.solve(qp.r[i]);
  ValueElement e;
  e.A = qp.A[i] - qp.B[i] * Rinv_S;
  e.P = symmetrized(qp.Q[i] - qp.S[i].transpose() * Rinv_S);
  e.C = symmetrized(qp.B[i] * Rinv_Bt);
  e.p = qp.q[i] - qp.S[i].transpose() * Rinv_r;
  e.b = qp.b[i] - qp.B[i] * Rinv_r;
  return e;
}

ValueElement terminal_value_element(const QPData& qp) {
  const int n = qp.nx();
  return {Matrix::Zero(n, n), symmetrized(qp.P_terminal), Matrix::Zero(n, n), qp.p_terminal, Vector::Zero(n)};
}

std::vector<ValueElement> init_value_elements(const QPData& qp) {
  qp.check_dimensions();
  const int N = qp.horizon();
  std::vector<ValueElement> elems(N + 1);
  for (int i = 0; i < N; ++i) elems[i] = stage_value_element(qp, i);
  elems[N] = combine(stage_value_element(qp, N), terminal_value_element(qp));
  return elems;
}

ValueElement combine(const ValueElement& ik, const ValueElement& kj) {
  const auto n = ik.A.rows();
  const Matrix M = Matrix::Identity(n, n) + ik.C * kj.P;
  Eigen::PartialPivLU<Matrix> lu(M);
  if (!(lu.rcond() > 1e-14)) throw SolverError("combine: I + C P is singular");

  // (I + P C)^{-1} = (I + C P)^{-T} since P and C are symmetric.
  const Matrix MinvA = lu.solve(ik.A);
  const Matrix MinvC = lu.solve(ik.C);
  const Vector Minvb = lu.solve(ik.b - ik.C * kj.p);
  const Matrix MtinvP = lu.transpose().solve(kj.P);
  const Vector Mtinvp = lu.transpose().solve(kj.p + kj.P * ik.b);

  ValueElement out;
  out.A = kj.A * MinvA;
  out.b = kj.A * Minvb + kj.b;
  out.C = symmetrized(kj.A * MinvC * kj.A.transpose() + kj.C);
  out.P = symmetrized(ik.A.transpose() * MtinvP * ik.A + ik.P);
  out.p = ik.A.transpose() * Mtinvp + ik.p;
  return out;
}

namespace {

// Per-node gains from the scanned cost-to-go; the nodes are independent.
void fill_gains(const QPData& qp, Policy& pol, int workers) {
  const int N = qp.horizon();
  pol.K.resize(N + 1);
  pol.k.resize(N + 1);
  parallel_for(N + 1, workers, [&](long i) {
    const Matrix& Pn = pol.P[i + 1];
    const Matrix PB = Pn * qp.B[i];
    const Matrix G = qp.R[i] + qp.B[i].transpose() * PB;
    const Matrix H = qp.S[i] + PB.transpose() * qp.A[i];
    const Vector h = qp.B[i].transpose() * (pol.p[i + 1] + Pn * qp.b[i]) + qp.r[i];
    Eigen::LLT<Matrix> llt(G);
    if (llt.info() != Eigen::Success) {
      throw SolverError("backward_scan: G not positive definite at node " + std::to_string(i),
                        static_cast<int>(i));
    }
    pol.K[i] = -llt.solve(H);
    pol.k[i] = -llt.solve(h);
  });
}

}  // namespace

Policy backward_scan(const QPData& qp, const ScanSettings& settings, int* depth) {
  const int N = qp.horizon();
  const int n = qp.nx();
  std::vector<ValueElement> elems(N + 1);
  {
    qp.check_dimensions();
    std::vector<ValueElement> stage(N + 1);
    parallel_for(N + 1, settings.workers, [&](long i) { stage[i] = stage_value_element(qp, static_cast<int>(i)); });
    for (int i = 0; i < N; ++i) elems[i] = std::move(stage[i]);
    elems[N] = combine(stage[N], terminal_value_element(qp));
  }

  ScanPlan plan{ScanDirection::reverse, settings.mode, settings.workers};
  auto op = [corrupt = settings.corrupt_combine](const ValueElement& a, const ValueElement& b) {
    ValueElement e = combine(a, b);
    if (corrupt) e.P.diagonal().array() += 1e-3;
    return e;
  };
  const std::vector<ValueElement> suffix = inclusive_scan(elems, op, plan, std::optional(ValueElement::identity(n)));
  if (depth) *depth = plan.depth;

  Policy pol;
  pol.P.resize(N + 2);
  pol.p.resize(N + 2);
  for (int i = 0; i <= N; ++i) {
    pol.P[i] = suffix[i].P;
    pol.p[i] = suffix[i].p;
  }
  pol.P[N + 1] = qp.P_terminal;
  pol.p[N + 1] = qp.p_terminal;
  fill_gains(qp, pol, settings.workers);
  return pol;
}

std::vector<TrajElement> init_traj_elements(const QPData& qp, const Policy& policy) {
  qp.check_dimensions();
  const int N = qp.horizon();
  if (static_cast<int>(policy.K.size()) != N + 1 || static_cast<int>(policy.k.size()) != N + 1) {
    throw std::invalid_argument("init_traj_elements: policy length does not match horizon");
  }
  std::vector<TrajElement> elems(N + 1);
  for (int i = 0; i <= N; ++i) {
    if (policy.K[i].rows() != qp.nu() || policy.K[i].cols() != qp.nx()) {
      throw std::invalid_argument("init_traj_elements: gain size mismatch at node " + std::to_string(i));
    }
    elems[i].A = qp.A[i] + qp.B[i] * policy.K[i];
    elems[i].b = qp.B[i] * policy.k[i] + qp.b[i];
  }
  elems[0].b = elems[0].A * qp.dx0 + elems[0].b;
  elems[0].A.setZero();
  return elems;
}

TrajElement combine_traj(const TrajElement& ik, const TrajElement& kj) {
  return {kj.A * ik.A, kj.A * ik.b + kj.b};
}

Direction forward_scan(const QPData& qp, const Policy& policy, const ScanSettings& settings, int* depth) {
  const int N = qp.horizon();
  const std::vector<TrajElement> elems = init_traj_elements(qp, policy);
  ScanPlan plan{ScanDirection::forward, settings.mode, settings.workers};
  const std::vector<TrajElement> prefix =
      inclusive_scan(elems, combine_traj, plan, std::optional(TrajElement::identity(qp.nx())));
  if (depth) *depth = plan.depth;

  Direction dir;
  dir.dx.resize(N + 2);
  dir.du.resize(N + 1);
  dir.dx[0] = qp.dx0;
  for (int i = 0; i <= N; ++i) dir.dx[i + 1] = prefix[i].b;
  parallel_for(N + 1, settings.workers, [&](long i) { dir.du[i] = policy.K[i] * dir.dx[i] + policy.k[i]; });
  return dir;
}

Direction solve_lqr_scan(const QPData& qp, const ScanSettings& settings, int* backward_depth,
                         int* forward_depth) {
  const Policy pol = backward_scan(qp, settings, backward_depth);
  Direction dir = forward_scan(qp, pol, settings, forward_depth);
  dir.dlambda = dual_update(pol, dir.dx);
  return dir;
}

}  // namespace pdilqr
