#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace pdilqr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Raised when a factorization or evaluation cannot proceed. `node()` is -1
/// when the failure is not tied to a horizon node.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what, int node = -1)
      : std::runtime_error(what), node_(node) {}

  int node() const noexcept { return node_; }

 private:
  int node_;
};

/// Equality-constrained LQ subproblem over nodes 0..N with terminal node N+1.
///
///   min  sum_i [q_i; r_i]'[dx_i; du_i] + 1/2 [dx_i; du_i]' [Q_i S_i'; S_i R_i] [dx_i; du_i]
///        + p_T' dx_{N+1} + 1/2 dx_{N+1}' P_T dx_{N+1}
///   s.t. dx_0 = dx0,  dx_{i+1} = A_i dx_i + B_i du_i + b_i
///
/// Per-node vectors have length N+1.
struct QPData {
  std::vector<Matrix> A, B;  // n x n, n x m
  std::vector<Vector> b;
  std::vector<Matrix> Q, S, R;  // n x n, m x n, m x m
  std::vector<Vector> q, r;
  Matrix P_terminal;
  Vector p_terminal;
  Vector dx0;

  int horizon() const { return static_cast<int>(A.size()) - 1; }
  int nx() const { return static_cast<int>(dx0.size()); }
  int nu() const { return B.empty() ? 0 : static_cast<int>(B.front().cols()); }

  /// Allocates zero-filled blocks for nodes 0..horizon.
  static QPData zeros(int horizon, int nx, int nu);

  /// Throws std::invalid_argument on inconsistent block sizes.
  void check_dimensions() const;
};

/// Feedback policy du_i = K_i dx_i + k_i and value function V_i = 1/2 x'P_i x + p_i'x.
/// K, k have N+1 entries; P, p have N+2 (the last is the terminal node).
struct Policy {
  std::vector<Matrix> K;
  std::vector<Vector> k;
  std::vector<Matrix> P;
  std::vector<Vector> p;
};

/// Primal-dual search direction. dx and dlambda have N+2 entries, du N+1.
struct Direction {
  std::vector<Vector> dx;
  std::vector<Vector> du;
  std::vector<Vector> dlambda;
};

// Max-abs over a sequence of blocks.
double max_abs(const std::vector<Vector>& seq);
double max_abs(const std::vector<Matrix>& seq);

/// max|a - b| / max|b| over a whole sequence; falls back to the absolute
/// difference when the reference is identically zero.
double relative_deviation(const std::vector<Vector>& a, const std::vector<Vector>& b);
double relative_deviation(const std::vector<Matrix>& a, const std::vector<Matrix>& b);

}  // namespace pdilqr
