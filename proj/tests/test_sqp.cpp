#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pdilqr/barrier.hpp"
#include "pdilqr/checks.hpp"
#include "pdilqr/kkt_oracle.hpp"
#include "pdilqr/lqr_kernels.hpp"
#include "pdilqr/models/toy_models.hpp"
#include "pdilqr/sqp.hpp"

using namespace pdilqr;

namespace {

OCPDef di_ocp(int N = 50, int dims = 2) {
  Vector x0 = Vector::Zero(2 * dims);
  x0.head(dims).setConstant(1.0);
  return models::double_integrator_ocp(N, 0.1, x0, Vector::Zero(2 * dims));
}

Trajectory random_guess(const OCPDef& ocp, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Trajectory t = constant_guess(ocp);
  for (auto& x : t.x) x = Vector::NullaryExpr(ocp.nx, [&](Eigen::Index) { return g(rng); });
  for (auto& u : t.u) u = Vector::NullaryExpr(ocp.nu, [&](Eigen::Index) { return g(rng); });
  return t;
}

double traj_diff(const Trajectory& a, const Trajectory& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.x.size(); ++i) d = std::max(d, (a.x[i] - b.x[i]).cwiseAbs().maxCoeff());
  for (size_t i = 0; i < a.u.size(); ++i) d = std::max(d, (a.u[i] - b.u[i]).cwiseAbs().maxCoeff());
  for (size_t i = 0; i < a.lambda.size(); ++i) d = std::max(d, (a.lambda[i] - b.lambda[i]).cwiseAbs().maxCoeff());
  return d;
}

OCPDef pendulum() { return models::pendulum_ocp(80, 0.05, Vector::Zero(2)); }

}  // namespace

TEST_CASE("barrier values") {
  CHECK(barrier_value(1.0, 1.0, 0.1) == 0.0);
  for (double delta : {0.01, 0.1, 1.0}) {
    const double seam = -2.0 * std::log(delta);
    CHECK(barrier_value(delta, 2.0, delta) == doctest::Approx(seam).epsilon(1e-14));
    CHECK(barrier_value(std::nextafter(delta, 0.0), 2.0, delta) == doctest::Approx(seam).epsilon(1e-12));
  }
  CHECK(std::abs(barrier_value(0.05, 1.0, 0.1) - (0.625 + std::log(10.0))) <= 1e-12);
  CHECK(barrier_value(0.05, 1.0, 0.1) == doctest::Approx(2.927585).epsilon(1e-7));
  CHECK(std::isfinite(barrier_value(-5.0, 1.0, 0.1)));
}

TEST_CASE("barrier derivatives match finite differences") {
  for (double mu : {0.5, 1.0})
    for (double delta : {0.05, 0.1, 1.0})
      for (int k = 0; k <= 40; ++k) {
        const double xi = delta / 10.0 * std::pow(100.0, k / 40.0);  // delta/10 .. 10 delta
        const double h = 1e-6 * delta;
        const double fd = (barrier_value(xi + h, mu, delta) - barrier_value(xi - h, mu, delta)) / (2 * h);
        CHECK(std::abs(fd - barrier_grad(xi, mu, delta)) <= 1e-6 * std::max(1.0, std::abs(fd)));
        const double fd2 = (barrier_grad(xi + h, mu, delta) - barrier_grad(xi - h, mu, delta)) / (2 * h);
        if (std::abs(xi - delta) > 2 * h)
          CHECK(std::abs(fd2 - barrier_hess(xi, mu, delta)) <= 1e-4 * std::max(1.0, std::abs(fd2)));
      }
}

TEST_CASE("linearize on a feasible point") {
  const OCPDef ocp = di_ocp(10);
  std::vector<Vector> u(11, Vector::Constant(2, 0.3));
  const Trajectory t = rollout(ocp, u);
  const Linearization lin = linearize(ocp, t);
  CHECK(max_abs(lin.qp.b) <= 1e-15);
  CHECK(lin.qp.dx0.norm() == 0.0);
  CHECK(lin.theta <= 1e-15);
  CHECK(constraint_violation(ocp, t) <= 1e-15);
}

TEST_CASE("linearize gradient includes multiplier terms") {
  const OCPDef ocp = di_ocp(3, 1);
  std::mt19937_64 rng(1);
  Trajectory t = random_guess(ocp, rng);
  for (auto& l : t.lambda) l = Vector::Random(2);
  const Linearization lin = linearize(ocp, t);
  for (int i = 0; i <= 3; ++i) {
    const ResidualEval r = ocp.stage_residual(i, t.x[i], t.u[i], true);
    const Matrix W = r.dx.transpose() * ocp.stage_weight[i] * r.dx;
    CHECK((lin.qp.Q[i] - W).cwiseAbs().maxCoeff() <= 1e-14);
    const Vector expected = r.dx.transpose() * ocp.stage_weight[i] * r.value + lin.qp.A[i].transpose() * t.lambda[i + 1] - t.lambda[i];
    CHECK((lin.qp.q[i] - expected).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("linearize rejects non-finite evaluations") {
  const OCPDef ocp = di_ocp(5);
  Trajectory t = constant_guess(ocp);
  t.u[3](0) = std::nan("");
  try {
    linearize(ocp, t);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.node() == 3);
  }
}

TEST_CASE("constraint violation") {
  const OCPDef ocp = di_ocp(10);
  std::vector<Vector> u(11, Vector::Constant(2, -0.2));
  Trajectory t = rollout(ocp, u);
  CHECK(constraint_violation(ocp, t) <= 1e-15);

  // the last state only enters node 10's defect
  Trajectory one = t;
  one.x[11](0) += 0.3;
  CHECK(constraint_violation(ocp, one) == doctest::Approx(0.3).epsilon(1e-12));

  Trajectory p = t;
  double expected = 0.0;
  for (int i = 0; i <= 10; ++i) {
    const Vector v = Vector::Random(4) * 0.1;
    p.x[i + 1] = ocp.dynamics(i, p.x[i], p.u[i], false).next + v;
    expected += v.norm();
  }
  CHECK(constraint_violation(ocp, p) == doctest::Approx(expected).epsilon(1e-12));

  Trajectory init = t;
  init.x[0](0) += 0.5;
  init.x[1] = ocp.dynamics(0, init.x[0], init.u[0], false).next;
  for (int i = 1; i <= 10; ++i) init.x[i + 1] = ocp.dynamics(i, init.x[i], init.u[i], false).next;
  CHECK(constraint_violation(ocp, init) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("filter picks 2^-3 on a crafted cost") {
  FilterReference ref;
  ref.cost = 1.0;
  ref.theta = 0.0;
  ref.directional_derivative = -1.0;
  ref.theta_max = 1.0;
  std::vector<Candidate> cands;
  for (double a : step_grid()) {
    const double armijo = ref.cost + ref.armijo_c1 * a * ref.directional_derivative;
    cands.push_back({a, a == 0.125 ? armijo - 0.01 : armijo + 0.01, 0.0});
  }
  const int best = select_step(ref, cands);
  REQUIRE(best >= 0);
  CHECK(cands[best].alpha == 0.125);

  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    std::shuffle(cands.begin(), cands.end(), rng);
    CHECK(cands[select_step(ref, cands)].alpha == 0.125);
  }
}

TEST_CASE("filter rules") {
  FilterReference ref;
  ref.cost = 1.0;
  ref.theta = 5.0;
  ref.theta_max = 1.0;
  CHECK(filter_accepts(ref, 1.0, 100.0, 4.0) == AcceptRule::theta_decrease);
  CHECK(filter_accepts(ref, 1.0, 0.0, 6.0) == AcceptRule::none);
  ref.theta = 0.5;
  ref.directional_derivative = 1.0;  // not a descent direction
  CHECK(filter_accepts(ref, 1.0, 2.0, 0.4) == AcceptRule::cost_or_theta);
  CHECK(filter_accepts(ref, 1.0, 0.9, 0.6) == AcceptRule::cost_or_theta);
  CHECK(filter_accepts(ref, 1.0, 2.0, 0.6) == AcceptRule::none);
  CHECK(filter_accepts(ref, 1.0, std::nan(""), 0.0) == AcceptRule::none);
}

TEST_CASE("zero direction is accepted with alpha 1") {
  const OCPDef ocp = di_ocp(8);
  const Trajectory t = constant_guess(ocp);
  const Linearization lin = linearize(ocp, t);
  Direction d;
  d.dx.assign(10, Vector::Zero(4));
  d.du.assign(9, Vector::Zero(2));
  d.dlambda.assign(10, Vector::Zero(4));
  const LineSearchResult ls = filter_line_search(ocp, t, d, lin, {});
  CHECK(ls.accepted);
  CHECK(ls.alpha == 1.0);
  CHECK(traj_diff(ls.traj, t) == 0.0);
}

TEST_CASE("one iterate solves a linear-quadratic OCP") {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 5; ++rep) {
    const OCPDef ocp = di_ocp(50);
    const Trajectory guess = random_guess(ocp, rng);
    for (Backend be : {Backend::sequential, Backend::scan}) {
      SolverOptions opt;
      opt.backend = be;
      const IterateResult it = sqp_iterate(ocp, guess, opt);
      CHECK(it.stats.accepted);
      CHECK(it.stats.alpha == 1.0);
      CHECK(it.stats.theta_new <= 1e-10);
    }
  }
}

TEST_CASE("double integrator matches the dense oracle") {
  const OCPDef ocp = di_ocp(16);
  const Trajectory guess = constant_guess(ocp);
  const Linearization lin = linearize(ocp, guess);
  CHECK(direction_deviation(solve_lqr_sequential(lin.qp), solve_kkt_dense(lin.qp)) <= 1e-8);
  const SolveResult sr = solve(ocp, guess, 10, 1e-9, {});
  CHECK(sr.stats.converged);
  CHECK(sr.stats.iterations.size() == 1);
}

TEST_CASE("double integrator at goal") {
  const OCPDef ocp = models::double_integrator_ocp(20, 0.1, Vector::Zero(4), Vector::Zero(4));
  const SolveResult sr = solve(ocp, constant_guess(ocp), 5, 1e-10, {});
  CHECK(sr.stats.converged);
  CHECK(max_abs(sr.traj.u) == 0.0);
  CHECK(evaluate_cost(ocp, sr.traj) == 0.0);
}

TEST_CASE("fixed point stays put") {
  const OCPDef ocp = di_ocp(30);
  const SolveResult sr = solve(ocp, constant_guess(ocp), 5, 1e-12, {});
  REQUIRE(sr.stats.converged);
  const Linearization lin = linearize(ocp, sr.traj);
  const Direction d = solve_lqr_sequential(lin.qp);
  CHECK(kkt_residual(assemble_kkt(lin.qp), d) <= 1e-10);
  const IterateResult it = sqp_iterate(ocp, sr.traj, {});
  CHECK(traj_diff(it.traj, sr.traj) <= 1e-8);
}

TEST_CASE("backends agree on the pendulum") {
  const OCPDef ocp = pendulum();
  Trajectory a = constant_guess(ocp), b = a;
  SolverOptions seq, scan;
  scan.backend = Backend::scan;
  for (int k = 0; k < 5; ++k) {
    const IterateResult ia = sqp_iterate(ocp, a, seq);
    const IterateResult ib = sqp_iterate(ocp, b, scan);
    CHECK(ia.stats.alpha == ib.stats.alpha);
    CHECK(traj_diff(ia.traj, ib.traj) <= 1e-8);
    a = ia.traj;
    b = ib.traj;
  }
}

TEST_CASE("solve with max_iters 0 is a no-op") {
  const OCPDef ocp = pendulum();
  std::mt19937_64 rng(5);
  const Trajectory guess = random_guess(ocp, rng);
  const SolveResult sr = solve(ocp, guess, 0, 1e-6, {});
  CHECK(sr.stats.iterations.empty());
  CHECK(traj_diff(sr.traj, guess) == 0.0);
}

TEST_CASE("pendulum swing-up") {
  const models::PendulumParams params;
  const OCPDef ocp = pendulum();
  for (Backend be : {Backend::sequential, Backend::scan}) {
    SolverOptions opt;
    opt.backend = be;
    const SolveResult sr = solve(ocp, models::pendulum_guess(ocp, 0.05), 50, 1e-6, opt);
    REQUIRE(sr.stats.converged);
    CHECK(sr.stats.iterations.size() <= 50);
    CHECK(constraint_violation(ocp, sr.traj) <= 1e-6);
    CHECK(std::abs(sr.traj.x.back()(0) - params.goal_angle) < 1e-3);
    for (const Vector& u : sr.traj.u) CHECK(std::abs(u(0)) < params.torque_limit);

    // Filter guarantee replayed from the stats.
    for (const IterationStats& s : sr.stats.iterations) {
      REQUIRE(s.accepted);
      const double slack = 1e-14 * std::max(1.0, std::abs(s.cost));
      const bool ok = s.cost_new < s.cost + slack || s.theta_new < s.theta ||
                      s.cost_new <= s.cost + 1e-4 * s.alpha * s.directional_derivative + slack;
      CHECK(ok);
    }
  }
}

TEST_CASE("pendulum hanging equilibrium") {
  models::PendulumParams params;
  params.goal_angle = 0.0;
  const OCPDef ocp = models::pendulum_ocp(30, 0.05, Vector::Zero(2), params);
  const SolveResult sr = solve(ocp, constant_guess(ocp), 10, 1e-9, {});
  CHECK(sr.stats.converged);
  CHECK(max_abs(sr.traj.u) <= 1e-12);
}

TEST_CASE("Gauss-Newton Hessians are PSD along the pendulum solve") {
  const OCPDef ocp = pendulum();
  Trajectory t = models::pendulum_guess(ocp, 0.05);
  for (int k = 0; k < 20; ++k) {
    const Linearization lin = linearize(ocp, t);
    for (int i = 0; i <= ocp.horizon; ++i) {
      CHECK(min_eigenvalue(lin.qp.Q[i]) >= -1e-10);
      CHECK(min_eigenvalue(lin.qp.R[i]) >= -1e-10);
    }
    CHECK(min_eigenvalue(lin.qp.P_terminal) >= -1e-10);
    const IterateResult it = sqp_iterate(ocp, t, {});
    if (!it.stats.accepted) break;
    t = it.traj;
  }
}

TEST_CASE("warm start shift") {
  Trajectory t;
  for (double v : {1.0, 2.0, 3.0}) {
    t.x.push_back(Vector::Constant(1, v));
    t.lambda.push_back(Vector::Constant(1, -v));
  }
  t.u = {Vector::Constant(1, 10.0), Vector::Constant(1, 20.0)};
  const Trajectory s = warm_start_shift(t);
  CHECK(s.x[0](0) == 2.0);
  CHECK(s.x[1](0) == 3.0);
  CHECK(s.x[2](0) == 3.0);
  CHECK(s.lambda[2](0) == -3.0);
  CHECK(s.u[0](0) == 20.0);
  CHECK(s.u[1](0) == 20.0);

  const OCPDef ocp = di_ocp(5);
  const Trajectory c = constant_guess(ocp);
  CHECK(traj_diff(warm_start_shift(c), c) == 0.0);
}
