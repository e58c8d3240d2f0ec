#include "pdilqr/checks.hpp"

#include <algorithm>
#include <limits>

#include <Eigen/Eigenvalues>

namespace pdilqr {

double direction_deviation(const Direction& a, const Direction& ref) {
  return std::max({relative_deviation(a.dx, ref.dx), relative_deviation(a.du, ref.du),
                   relative_deviation(a.dlambda, ref.dlambda)});
}

namespace {

double ratio(double diff, double scale) { return scale > 0.0 ? diff / scale : diff; }

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.size() == 0 && b.size() == 0) return 0.0;
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
  return (a - b).cwiseAbs().maxCoeff();
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace

double element_deviation(const ValueElement& a, const ValueElement& ref) {
  const double diff = std::max({max_abs_diff(a.A, ref.A), max_abs_diff(a.P, ref.P), max_abs_diff(a.C, ref.C),
                                max_abs_diff(a.p, ref.p), max_abs_diff(a.b, ref.b)});
  const double scale = std::max({max_abs(ref.A), max_abs(ref.P), max_abs(ref.C), max_abs(ref.p), max_abs(ref.b)});
  return ratio(diff, scale);
}

double element_deviation(const TrajElement& a, const TrajElement& ref) {
  const double diff = std::max(max_abs_diff(a.A, ref.A), max_abs_diff(a.b, ref.b));
  return ratio(diff, std::max(max_abs(ref.A), max_abs(ref.b)));
}

Matrix central_difference(const std::function<Vector(const Vector&)>& f, const Vector& x, double h) {
  const Vector f0 = f(x);
  Matrix J(f0.size(), x.size());
  Vector xp = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    xp(j) = x(j) + h;
    const Vector fp = f(xp);
    xp(j) = x(j) - h;
    const Vector fm = f(xp);
    xp(j) = x(j);
    J.col(j) = (fp - fm) / (2.0 * h);
  }
  return J;
}

double jacobian_error(const std::function<Vector(const Vector&, const Vector&)>& f, const Vector& x,
                      const Vector& u, const Matrix& dx, const Matrix& du, double h) {
  const Matrix fx = central_difference([&](const Vector& xs) { return f(xs, u); }, x, h);
  const Matrix fu = central_difference([&](const Vector& us) { return f(x, us); }, u, h);
  return std::max(max_abs_diff(fx, dx), max_abs_diff(fu, du));
}

double min_eigenvalue(const Matrix& M) {
  if (M.size() == 0) return std::numeric_limits<double>::infinity();
  const Matrix S = 0.5 * (M + M.transpose());
  return Eigen::SelfAdjointEigenSolver<Matrix>(S, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

}  // namespace pdilqr
