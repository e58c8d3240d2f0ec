#include "pdilqr/sqp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "pdilqr/barrier.hpp"
#include "pdilqr/lqr_kernels.hpp"
#include "pdilqr/parallel.hpp"

namespace pdilqr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Sequence sums are accumulated serially in node order so that results do not
// depend on the worker count.
double ordered_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double quadratic(const Vector& eps, const Matrix& W) { return 0.5 * eps.dot(W * eps); }

double constraint_cost(const std::vector<ConstraintEval>& cs) {
  double c = 0.0;
  for (const auto& e : cs) c += barrier_value(e.value, e.mu, e.delta);
  return c;
}

void require_finite(bool ok, int node, const char* term) {
  if (!ok) throw SolverError(std::string("linearize: non-finite ") + term + " at node " + std::to_string(node), node);
}

}  // namespace

std::array<double, kLineSearchSteps> step_grid() {
  std::array<double, kLineSearchSteps> grid{};
  for (int j = 0; j < kLineSearchSteps; ++j) grid[j] = std::ldexp(1.0, -j);
  return grid;
}

double evaluate_cost(const OCPDef& ocp, const Trajectory& traj, int workers) {
  const int N = ocp.horizon;
  std::vector<double> node_cost(N + 2, 0.0);
  parallel_for(N + 1, workers, [&](long i) {
    const ResidualEval res = ocp.stage_residual(static_cast<int>(i), traj.x[i], traj.u[i], false);
    double c = quadratic(res.value, ocp.stage_weight[i]);
    if (ocp.stage_constraints) c += constraint_cost(ocp.stage_constraints(static_cast<int>(i), traj.x[i], traj.u[i], false));
    node_cost[i] = c;
  });
  node_cost[N + 1] = quadratic(ocp.terminal_residual(traj.x[N + 1], false).value, ocp.terminal_weight);
  if (ocp.terminal_constraints) node_cost[N + 1] += constraint_cost(ocp.terminal_constraints(traj.x[N + 1], false));
  return ordered_sum(node_cost);
}

double constraint_violation(const OCPDef& ocp, const Trajectory& traj, int workers) {
  const int N = ocp.horizon;
  std::vector<double> defect(N + 2, 0.0);
  parallel_for(N + 1, workers, [&](long i) {
    defect[i + 1] = (traj.x[i + 1] - ocp.dynamics(static_cast<int>(i), traj.x[i], traj.u[i], false).next).norm();
  });
  defect[0] = (ocp.x0 - traj.x[0]).norm();
  return ordered_sum(defect);
}

Linearization linearize(const OCPDef& ocp, const Trajectory& traj, int workers) {
  const int N = ocp.horizon;
  const int n = ocp.nx;
  const int m = ocp.nu;
  Linearization lin;
  lin.qp = QPData::zeros(N, n, m);
  lin.cost_grad_x.assign(N + 2, Vector::Zero(n));
  lin.cost_grad_u.assign(N + 1, Vector::Zero(m));
  std::vector<double> node_cost(N + 2, 0.0);
  std::vector<double> defect(N + 2, 0.0);
  QPData& qp = lin.qp;

  parallel_for(N + 1, workers, [&](long li) {
    const int i = static_cast<int>(li);
    const DynamicsEval dyn = ocp.dynamics(i, traj.x[i], traj.u[i], true);
    require_finite(dyn.next.allFinite(), i, "dynamics");
    require_finite(dyn.A.allFinite() && dyn.B.allFinite(), i, "dynamics Jacobian");
    qp.A[i] = dyn.A;
    qp.B[i] = dyn.B;
    qp.b[i] = dyn.next - traj.x[i + 1];
    defect[i + 1] = qp.b[i].norm();

    const ResidualEval res = ocp.stage_residual(i, traj.x[i], traj.u[i], true);
    require_finite(res.value.allFinite(), i, "stage residual");
    require_finite(res.dx.allFinite() && res.du.allFinite(), i, "stage residual Jacobian");
    const Matrix& W = ocp.stage_weight[i];
    const Matrix WJx = W * res.dx;
    const Matrix WJu = W * res.du;
    const Vector We = W * res.value;
    Matrix Q = res.dx.transpose() * WJx;
    Matrix R = res.du.transpose() * WJu;
    Matrix S = res.du.transpose() * WJx;
    Vector gx = res.dx.transpose() * We;
    Vector gu = res.du.transpose() * We;
    double cost = 0.5 * res.value.dot(We);

    if (ocp.stage_constraints) {
      for (const ConstraintEval& c : ocp.stage_constraints(i, traj.x[i], traj.u[i], true)) {
        require_finite(std::isfinite(c.value) && c.dx.allFinite() && c.du.allFinite(), i, "barrier constraint");
        const double d1 = barrier_grad(c.value, c.mu, c.delta);
        const double d2 = barrier_hess(c.value, c.mu, c.delta);
        Q.noalias() += d2 * c.dx * c.dx.transpose();
        R.noalias() += d2 * c.du * c.du.transpose();
        S.noalias() += d2 * c.du * c.dx.transpose();
        gx += d1 * c.dx;
        gu += d1 * c.du;
        cost += barrier_value(c.value, c.mu, c.delta);
      }
    }
    qp.Q[i] = 0.5 * (Q + Q.transpose());
    qp.R[i] = 0.5 * (R + R.transpose());
    qp.S[i] = S;
    lin.cost_grad_x[i] = gx;
    lin.cost_grad_u[i] = gu;
    qp.q[i] = gx + dyn.A.transpose() * traj.lambda[i + 1] - traj.lambda[i];
    qp.r[i] = gu + dyn.B.transpose() * traj.lambda[i + 1];
    node_cost[i] = cost;
  });

  const Vector& xT = traj.x[N + 1];
  const ResidualEval res = ocp.terminal_residual(xT, true);
  require_finite(res.value.allFinite() && res.dx.allFinite(), N + 1, "terminal residual");
  const Vector We = ocp.terminal_weight * res.value;
  Matrix PT = res.dx.transpose() * ocp.terminal_weight * res.dx;
  Vector gT = res.dx.transpose() * We;
  double costT = 0.5 * res.value.dot(We);
  if (ocp.terminal_constraints) {
    for (const ConstraintEval& c : ocp.terminal_constraints(xT, true)) {
      require_finite(std::isfinite(c.value) && c.dx.allFinite(), N + 1, "terminal barrier constraint");
      PT.noalias() += barrier_hess(c.value, c.mu, c.delta) * c.dx * c.dx.transpose();
      gT += barrier_grad(c.value, c.mu, c.delta) * c.dx;
      costT += barrier_value(c.value, c.mu, c.delta);
    }
  }
  qp.P_terminal = 0.5 * (PT + PT.transpose());
  lin.cost_grad_x[N + 1] = gT;
  qp.p_terminal = gT - traj.lambda[N + 1];
  node_cost[N + 1] = costT;

  qp.dx0 = ocp.x0 - traj.x[0];
  defect[0] = qp.dx0.norm();
  lin.cost = ordered_sum(node_cost);
  lin.theta = ordered_sum(defect);
  return lin;
}

Trajectory apply_step(const Trajectory& traj, const Direction& dir, double alpha) {
  Trajectory out = traj;
  for (size_t i = 0; i < out.x.size(); ++i) out.x[i] += alpha * dir.dx[i];
  for (size_t i = 0; i < out.u.size(); ++i) out.u[i] += alpha * dir.du[i];
  for (size_t i = 0; i < out.lambda.size(); ++i) out.lambda[i] += alpha * dir.dlambda[i];
  return out;
}

const char* to_string(AcceptRule rule) {
  switch (rule) {
    case AcceptRule::none: return "rejected";
    case AcceptRule::theta_decrease: return "theta_decrease";
    case AcceptRule::armijo: return "armijo";
    case AcceptRule::cost_or_theta: return "cost_or_theta";
    case AcceptRule::zero_step: return "zero_step";
  }
  return "?";
}

AcceptRule filter_accepts(const FilterReference& ref, double alpha, double cost, double theta) {
  if (!std::isfinite(cost) || !std::isfinite(theta)) return AcceptRule::none;
  if (ref.theta > ref.theta_max) return theta < ref.theta ? AcceptRule::theta_decrease : AcceptRule::none;
  // slack of a few ulps so that steps below roundoff near a stationary point are not rejected
  const double slack = 1e-14 * std::max(1.0, std::abs(ref.cost));
  if (ref.directional_derivative < 0.0) {
    return cost <= ref.cost + ref.armijo_c1 * alpha * ref.directional_derivative + slack ? AcceptRule::armijo
                                                                                        : AcceptRule::none;
  }
  return (cost < ref.cost + slack || theta < ref.theta) ? AcceptRule::cost_or_theta : AcceptRule::none;
}

int select_step(const FilterReference& ref, const std::vector<Candidate>& candidates) {
  int best = -1;
  for (int j = 0; j < static_cast<int>(candidates.size()); ++j) {
    const Candidate& c = candidates[j];
    if (filter_accepts(ref, c.alpha, c.cost, c.theta) == AcceptRule::none) continue;
    if (best < 0 || c.alpha > candidates[best].alpha) best = j;
  }
  return best;
}

namespace {

bool is_zero(const Direction& dir) {
  return max_abs(dir.dx) == 0.0 && max_abs(dir.du) == 0.0 && max_abs(dir.dlambda) == 0.0;
}

double directional_derivative(const Linearization& lin, const Direction& dir) {
  double d = 0.0;
  for (size_t i = 0; i < dir.dx.size(); ++i) d += lin.cost_grad_x[i].dot(dir.dx[i]);
  for (size_t i = 0; i < dir.du.size(); ++i) d += lin.cost_grad_u[i].dot(dir.du[i]);
  return d;
}

double direction_norm(const Direction& dir) {
  return std::max({max_abs(dir.dx), max_abs(dir.du), max_abs(dir.dlambda)});
}

}  // namespace

LineSearchResult filter_line_search(const OCPDef& ocp, const Trajectory& traj, const Direction& dir,
                                    const Linearization& lin, const SolverOptions& options) {
  LineSearchResult result;
  result.traj = traj;
  result.cost = lin.cost;
  result.theta = lin.theta;
  if (is_zero(dir)) {
    result.alpha = 1.0;
    result.accepted = true;
    result.rule = AcceptRule::zero_step;
    return result;
  }

  FilterReference ref;
  ref.cost = lin.cost;
  ref.theta = lin.theta;
  ref.directional_derivative = directional_derivative(lin, dir);
  ref.theta_max = options.theta_max_per_node * (ocp.horizon + 1);
  ref.armijo_c1 = options.armijo_c1;

  const auto grid = step_grid();
  std::vector<Candidate> candidates(kLineSearchSteps);
  std::vector<Trajectory> trials(kLineSearchSteps);
  parallel_for(kLineSearchSteps, options.workers, [&](long j) {
    trials[j] = apply_step(traj, dir, grid[j]);
    try {
      candidates[j] = {grid[j], evaluate_cost(ocp, trials[j]), constraint_violation(ocp, trials[j])};
    } catch (const SolverError&) {
      // model refused the trial point (e.g. a state guard); treat as rejected
      const double inf = std::numeric_limits<double>::infinity();
      candidates[j] = {grid[j], inf, inf};
    }
  });

  const int best = select_step(ref, candidates);
  if (best < 0) return result;
  result.alpha = candidates[best].alpha;
  result.traj = std::move(trials[best]);
  result.accepted = true;
  result.rule = filter_accepts(ref, result.alpha, candidates[best].cost, candidates[best].theta);
  result.cost = candidates[best].cost;
  result.theta = candidates[best].theta;
  return result;
}

Direction solve_qp(const QPData& qp, const SolverOptions& options, int* scan_depth) {
  if (options.backend == Backend::sequential) {
    if (scan_depth) *scan_depth = 0;
    return solve_lqr_sequential(qp);
  }
  int backward_depth = 0;
  int forward_depth = 0;
  Direction dir = solve_lqr_scan(qp, options.scan, &backward_depth, &forward_depth);
  if (scan_depth) *scan_depth = std::max(backward_depth, forward_depth);
  return dir;
}

IterateResult sqp_iterate(const OCPDef& ocp, const Trajectory& traj, const SolverOptions& options) {
  IterateResult out;
  out.traj = traj;
  IterationStats& st = out.stats;

  auto t0 = Clock::now();
  const Linearization lin = linearize(ocp, traj, options.workers);
  st.linearize_seconds = seconds_since(t0);
  st.cost = st.cost_new = lin.cost;
  st.theta = st.theta_new = lin.theta;

  const double reg_limit = options.reg_max * (1.0 + 1e-9);
  auto next_reg = [&](double rho) { return rho == 0.0 ? options.reg_initial : rho * options.reg_growth; };

  double rho = 0.0;
  bool retried_after_rejection = false;
  while (true) {
    QPData qp = lin.qp;
    if (rho > 0.0)
      for (auto& R : qp.R) R.diagonal().array() += rho;

    t0 = Clock::now();
    Direction dir;
    try {
      dir = solve_qp(qp, options, &st.scan_depth);
    } catch (const SolverError&) {
      st.qp_seconds += seconds_since(t0);
      rho = next_reg(rho);
      if (rho > reg_limit) return out;
      continue;
    }
    st.qp_seconds += seconds_since(t0);
    st.qp_solved = true;
    st.regularization = rho;
    st.direction_norm = direction_norm(dir);
    st.directional_derivative = directional_derivative(lin, dir);

    t0 = Clock::now();
    LineSearchResult ls = filter_line_search(ocp, traj, dir, lin, options);
    st.line_search_seconds += seconds_since(t0);
    out.direction = std::move(dir);
    if (ls.accepted) {
      st.accepted = true;
      st.alpha = ls.alpha;
      st.rule = ls.rule;
      st.cost_new = ls.cost;
      st.theta_new = ls.theta;
      out.traj = std::move(ls.traj);
      return out;
    }
    if (retried_after_rejection) return out;
    retried_after_rejection = true;
    rho = next_reg(rho);
    if (rho > reg_limit) return out;
  }
}

SolveResult solve(const OCPDef& ocp, const Trajectory& initial, int max_iters, double tol,
                  const SolverOptions& options) {
  ocp.validate();
  SolveResult result;
  result.traj = initial;
  while (static_cast<int>(result.stats.iterations.size()) < max_iters) {
    IterateResult it = sqp_iterate(ocp, result.traj, options);
    if (it.stats.qp_solved && it.stats.theta <= tol && it.stats.direction_norm <= tol) {
      result.stats.converged = true;
      break;
    }
    result.stats.iterations.push_back(it.stats);
    if (!it.stats.accepted) break;
    result.traj = std::move(it.traj);
  }
  return result;
}

}  // namespace pdilqr
