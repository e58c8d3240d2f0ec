#include "pdilqr/types.hpp"

#include <algorithm>

namespace pdilqr {

QPData QPData::zeros(int horizon, int nx, int nu) {
  if (horizon < 0 || nx < 1 || nu < 0) throw std::invalid_argument("QPData::zeros: bad dimensions");
  const auto nodes = static_cast<size_t>(horizon) + 1;
  QPData qp;
  qp.A.assign(nodes, Matrix::Zero(nx, nx));
  qp.B.assign(nodes, Matrix::Zero(nx, nu));
  qp.b.assign(nodes, Vector::Zero(nx));
  qp.Q.assign(nodes, Matrix::Zero(nx, nx));
  qp.S.assign(nodes, Matrix::Zero(nu, nx));
  qp.R.assign(nodes, Matrix::Zero(nu, nu));
  qp.q.assign(nodes, Vector::Zero(nx));
  qp.r.assign(nodes, Vector::Zero(nu));
  qp.P_terminal = Matrix::Zero(nx, nx);
  qp.p_terminal = Vector::Zero(nx);
  qp.dx0 = Vector::Zero(nx);
  return qp;
}

void QPData::check_dimensions() const {
  const size_t nodes = A.size();
  if (nodes == 0) throw std::invalid_argument("QPData: empty horizon");
  if (B.size() != nodes || b.size() != nodes || Q.size() != nodes || S.size() != nodes ||
      R.size() != nodes || q.size() != nodes || r.size() != nodes) {
    throw std::invalid_argument("QPData: per-node sequences differ in length");
  }
  const auto n = dx0.size();
  const auto m = B.front().cols();
  for (size_t i = 0; i < nodes; ++i) {
    const bool ok = A[i].rows() == n && A[i].cols() == n && B[i].rows() == n && B[i].cols() == m &&
                    b[i].size() == n && Q[i].rows() == n && Q[i].cols() == n && S[i].rows() == m &&
                    S[i].cols() == n && R[i].rows() == m && R[i].cols() == m && q[i].size() == n &&
                    r[i].size() == m;
    if (!ok) throw std::invalid_argument("QPData: block size mismatch at node " + std::to_string(i));
  }
  if (P_terminal.rows() != n || P_terminal.cols() != n || p_terminal.size() != n) {
    throw std::invalid_argument("QPData: terminal block size mismatch");
  }
}

double max_abs(const std::vector<Vector>& seq) {
  double m = 0.0;
  for (const auto& v : seq)
    if (v.size() > 0) m = std::max(m, v.cwiseAbs().maxCoeff());
  return m;
}

double max_abs(const std::vector<Matrix>& seq) {
  double m = 0.0;
  for (const auto& v : seq)
    if (v.size() > 0) m = std::max(m, v.cwiseAbs().maxCoeff());
  return m;
}

namespace {

template <typename T>
double relative_deviation_impl(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("relative_deviation: length mismatch");
  double diff = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) throw std::invalid_argument("relative_deviation: block mismatch");
    if (a[i].size() > 0) diff = std::max(diff, (a[i] - b[i]).cwiseAbs().maxCoeff());
  }
  const double scale = max_abs(b);
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace

double relative_deviation(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  return relative_deviation_impl(a, b);
}

double relative_deviation(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  return relative_deviation_impl(a, b);
}

}  // namespace pdilqr
