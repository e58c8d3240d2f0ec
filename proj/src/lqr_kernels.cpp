#include "pdilqr/lqr_kernels.hpp"

#include <Eigen/Cholesky>

namespace pdilqr {

Policy riccati_backward(const QPData& qp) {
  qp.check_dimensions();
  const int N = qp.horizon();
  Policy pol;
  pol.K.resize(N + 1);
  pol.k.resize(N + 1);
  pol.P.resize(N + 2);
  pol.p.resize(N + 2);
  pol.P[N + 1] = qp.P_terminal;
  pol.p[N + 1] = qp.p_terminal;

  for (int i = N; i >= 0; --i) {
    const Matrix& Pn = pol.P[i + 1];
    const Vector& pn = pol.p[i + 1];
    const Matrix PB = Pn * qp.B[i];
    const Matrix G = qp.R[i] + qp.B[i].transpose() * PB;
    const Matrix H = qp.S[i] + PB.transpose() * qp.A[i];
    const Vector pnb = pn + Pn * qp.b[i];
    const Vector h = qp.B[i].transpose() * pnb + qp.r[i];

    Eigen::LLT<Matrix> llt(G);
    if (llt.info() != Eigen::Success) {
      throw SolverError("riccati_backward: G not positive definite at node " + std::to_string(i), i);
    }
    pol.K[i] = -llt.solve(H);
    pol.k[i] = -llt.solve(h);

    Matrix P = qp.Q[i] + qp.A[i].transpose() * Pn * qp.A[i] + pol.K[i].transpose() * H;
    pol.P[i] = 0.5 * (P + P.transpose());
    pol.p[i] = qp.q[i] + qp.A[i].transpose() * pnb + pol.K[i].transpose() * h;
  }
  return pol;
}

Direction forward_rollout(const QPData& qp, const Policy& policy) {
  qp.check_dimensions();
  const int N = qp.horizon();
  if (static_cast<int>(policy.K.size()) != N + 1 || static_cast<int>(policy.k.size()) != N + 1) {
    throw std::invalid_argument("forward_rollout: policy length does not match horizon");
  }
  Direction dir;
  dir.dx.resize(N + 2);
  dir.du.resize(N + 1);
  dir.dx[0] = qp.dx0;
  for (int i = 0; i <= N; ++i) {
    if (policy.K[i].rows() != qp.nu() || policy.K[i].cols() != qp.nx()) {
      throw std::invalid_argument("forward_rollout: gain size mismatch at node " + std::to_string(i));
    }
    dir.du[i] = policy.K[i] * dir.dx[i] + policy.k[i];
    dir.dx[i + 1] = qp.A[i] * dir.dx[i] + qp.B[i] * dir.du[i] + qp.b[i];
  }
  return dir;
}

std::vector<Vector> dual_update(const Policy& policy, const std::vector<Vector>& dx) {
  if (policy.P.size() != dx.size() || policy.p.size() != dx.size()) {
    throw std::invalid_argument("dual_update: length mismatch");
  }
  std::vector<Vector> dlambda(dx.size());
  const auto count = static_cast<long>(dx.size());
#pragma omp parallel for schedule(static) if (count > 64)
  for (long i = 0; i < count; ++i) {
    dlambda[i] = policy.P[i] * dx[i] + policy.p[i];
  }
  return dlambda;
}

Direction solve_lqr_sequential(const QPData& qp) {
  const Policy pol = riccati_backward(qp);
  Direction dir = forward_rollout(qp, pol);
  dir.dlambda = dual_update(pol, dir.dx);
  return dir;
}

}  // namespace pdilqr
