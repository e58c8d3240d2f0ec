#include "pdilqr/random_qp.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

namespace pdilqr {

namespace {

Matrix gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = dist(rng);
  return m;
}

Vector gaussian(int n, std::mt19937_64& rng) { return gaussian(n, 1, rng); }

Matrix orthogonal(int n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(n, n, rng));
  return qr.householderQ() * Matrix::Identity(n, n);
}

Matrix with_spectral_norm(const Matrix& m, double bound) {
  const double sigma = Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
  return sigma > bound ? Matrix(m * (bound / sigma)) : m;
}

}  // namespace

Matrix random_psd(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Matrix U = orthogonal(n, rng);
  Vector eig(n);
  for (int i = 0; i < n; ++i) eig(i) = unit(rng);
  Matrix P = U * eig.asDiagonal() * U.transpose();
  return 0.5 * (P + P.transpose());
}

QPData random_qp(int horizon, int nx, int nu, std::mt19937_64& rng) {
  QPData qp = QPData::zeros(horizon, nx, nu);
  const int d = nx + nu;
  for (int i = 0; i <= horizon; ++i) {
    qp.A[i] = with_spectral_norm(gaussian(nx, nx, rng), 0.95);
    qp.B[i] = gaussian(nx, nu, rng) / std::sqrt(static_cast<double>(nx));
    qp.b[i] = 0.1 * gaussian(nx, rng);
    const Matrix L = gaussian(d, d, rng) / std::sqrt(static_cast<double>(d));
    Matrix H = L * L.transpose() + 0.1 * Matrix::Identity(d, d);
    H = 0.5 * (H + H.transpose());
    qp.Q[i] = H.topLeftCorner(nx, nx);
    qp.S[i] = H.bottomLeftCorner(nu, nx);
    qp.R[i] = H.bottomRightCorner(nu, nu);
    qp.q[i] = gaussian(nx, rng);
    qp.r[i] = gaussian(nu, rng);
  }
  qp.P_terminal = random_psd(nx, rng) + 0.1 * Matrix::Identity(nx, nx);
  qp.p_terminal = gaussian(nx, rng);
  qp.dx0 = gaussian(nx, rng);
  return qp;
}

ValueElement random_value_element(int n, std::mt19937_64& rng) {
  ValueElement e;
  e.A = with_spectral_norm(gaussian(n, n, rng), 1.0);
  e.P = random_psd(n, rng);
  e.C = random_psd(n, rng);
  e.p = gaussian(n, rng);
  e.b = gaussian(n, rng);
  return e;
}

TrajElement random_traj_element(int n, std::mt19937_64& rng) {
  return {with_spectral_norm(gaussian(n, n, rng), 1.0), gaussian(n, rng)};
}

}  // namespace pdilqr
