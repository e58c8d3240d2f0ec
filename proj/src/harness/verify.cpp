#include "pdilqr/harness/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pdilqr/barrier.hpp"
#include "pdilqr/checks.hpp"
#include "pdilqr/kkt_oracle.hpp"
#include "pdilqr/lqr_kernels.hpp"
#include "pdilqr/models/srbd.hpp"
#include "pdilqr/models/toy_models.hpp"
#include "pdilqr/random_qp.hpp"

namespace pdilqr::harness {

namespace {

SuiteResult finish(std::string name, int cases, double err, double tol) {
  return {std::move(name), cases, err, tol, std::isfinite(err) && err <= tol};
}

SuiteResult kkt_suite(std::mt19937_64& rng) {
  double err = 0.0;
  int cases = 0;
  for (int N : {1, 8, 16})
    for (int n : {2, 4, 8})
      for (int m : {1, 2, 4}) {
        const QPData qp = random_qp(N, n, m, rng);
        err = std::max(err, direction_deviation(solve_lqr_sequential(qp), solve_kkt_dense(qp)));
        ++cases;
      }
  return finish("riccati_vs_kkt", cases, err, 1e-8);
}

SuiteResult scan_suite(std::mt19937_64& rng, const ScanSettings& scan) {
  double err = 0.0;
  int cases = 0;
  for (ScanMode mode : {ScanMode::sequential, ScanMode::tree})
    for (int N : {0, 1, 8, 64, 256})
      for (int n : {2, 8}) {
        const QPData qp = random_qp(N, n, std::max(1, n / 2), rng);
        ScanSettings s = scan;
        s.mode = mode;
        err = std::max(err, direction_deviation(solve_lqr_scan(qp, s), solve_lqr_sequential(qp)));
        ++cases;
      }
  return finish("scan_vs_riccati", cases, err, 1e-8);
}

SuiteResult associativity_suite(std::mt19937_64& rng) {
  double err = 0.0;
  const int cases = 200;
  for (int c = 0; c < cases; ++c) {
    const int n = 1 + c % 6;
    const ValueElement a = random_value_element(n, rng), b = random_value_element(n, rng),
                       d = random_value_element(n, rng);
    err = std::max(err, element_deviation(combine(combine(a, b), d), combine(a, combine(b, d))));
    const TrajElement ta = random_traj_element(n, rng), tb = random_traj_element(n, rng),
                      td = random_traj_element(n, rng);
    err = std::max(err, element_deviation(combine_traj(combine_traj(ta, tb), td), combine_traj(ta, combine_traj(tb, td))));
  }
  return finish("associativity", cases, err, 1e-10);
}

SuiteResult identity_suite(std::mt19937_64& rng) {
  double err = 0.0;
  const int cases = 50;
  for (int c = 0; c < cases; ++c) {
    const int n = 1 + c % 6;
    const ValueElement a = random_value_element(n, rng);
    const ValueElement e = ValueElement::identity(n);
    err = std::max({err, element_deviation(combine(e, a), a), element_deviation(combine(a, e), a)});
    const TrajElement t = random_traj_element(n, rng);
    const TrajElement te = TrajElement::identity(n);
    err = std::max({err, element_deviation(combine_traj(te, t), t), element_deviation(combine_traj(t, te), t)});
  }
  return finish("identity", cases, err, 1e-12);
}

// Errors are reported relative to each check's own tolerance, so the suite
// passes when the largest ratio is <= 1.
SuiteResult barrier_suite() {
  double worst = 0.0;
  auto check = [&worst](double err, double tol) { worst = std::max(worst, err / tol); };

  const double worked = barrier_value(0.05, 1.0, 0.1);
  check(std::abs(worked - (0.625 + std::log(10.0))), 1e-9);
  check(std::abs(worked - 2.927585), 5e-7);  // quoted to 7 digits
  int cases = 1;
  for (double mu : {0.1, 1.0, 3.0})
    for (double delta : {0.01, 0.1, 1.0}) {
      const double h = 1e-8 * delta;
      check(std::abs(barrier_value(delta - h, mu, delta) - barrier_value(delta + h, mu, delta)), 1e-6);
      check(std::abs(barrier_grad(delta - h, mu, delta) - barrier_grad(delta + h, mu, delta)) /
                std::max(1.0, std::abs(barrier_grad(delta, mu, delta))),
            1e-6);
      for (double xi : {0.5 * delta, delta, 2.0 * delta}) {
        const double step = 1e-6 * delta;
        const double fd = (barrier_value(xi + step, mu, delta) - barrier_value(xi - step, mu, delta)) / (2.0 * step);
        check(std::abs(fd - barrier_grad(xi, mu, delta)) / std::max(1.0, std::abs(fd)), 1e-6);
      }
      ++cases;
    }
  return finish("barrier", cases, worst, 1.0);
}

SuiteResult jacobian_suite(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double err = 0.0;
  int cases = 0;

  const OCPDef pend = models::pendulum_ocp(10, 0.05, Vector::Zero(2));
  for (int c = 0; c < 10; ++c, ++cases) {
    const Vector x = Vector::NullaryExpr(2, [&](Eigen::Index) { return 3.0 * U(rng); });
    const Vector u = Vector::Constant(1, 5.0 * U(rng));
    const DynamicsEval e = pend.dynamics(0, x, u, true);
    err = std::max(err, jacobian_error([&](const Vector& xs, const Vector& us) { return pend.dynamics(0, xs, us, false).next; },
                                       x, u, e.A, e.B));
  }

  const models::RobotParams robot;
  models::Footholds feet = robot.stance_offsets;
  models::Contacts all{true, true, true, true};
  for (int c = 0; c < 20; ++c, ++cases) {
    Vector x(models::kSrbdStates), u(models::kSrbdInputs);
    for (int i = 0; i < x.size(); ++i) x(i) = 0.3 * U(rng);
    for (int i = 0; i < u.size(); ++i) u(i) = 40.0 * U(rng) + (i % 3 == 2 ? 40.0 : 0.0);
    models::Contacts contacts = all;
    if (c % 2) contacts = {true, false, false, true};
    const auto e = models::srbd_continuous(x, u, robot, feet, contacts, true);
    err = std::max(err, jacobian_error([&](const Vector& xs, const Vector& us) {
                     return models::srbd_dynamics(xs, us, robot, feet, contacts);
                   }, x, u, e.dx, e.du));
    const models::ContinuousDynamics f = [&](const Vector& xs, const Vector& us, bool j) {
      return models::srbd_continuous(xs, us, robot, feet, contacts, j);
    };
    const DynamicsEval d = models::rk4_step(f, x, u, 0.02, true);
    err = std::max(err, jacobian_error([&](const Vector& xs, const Vector& us) { return models::rk4_step(f, xs, us, 0.02, false).next; },
                                       x, u, d.A, d.B));
  }
  return finish("jacobians", cases, err, 1e-5);
}

SuiteResult depth_suite(const ScanSettings& scan) {
  double err = 0.0;
  int cases = 0;
  for (long L = 1; L <= 256; ++L, ++cases) {
    std::vector<long> v(L, 1);
    ScanPlan plan;
    plan.mode = ScanMode::tree;
    plan.workers = scan.workers;
    const auto out = inclusive_scan(v, [](long a, long b) { return a + b; }, plan, std::optional<long>(0));
    const int expected = 2 * ceil_log2(L);
    if (plan.depth != expected) err = std::max(err, std::abs(double(plan.depth - expected)));
    for (long j = 0; j < L; ++j)
      if (out[j] != j + 1) err = std::max(err, 1.0);
  }
  return finish("scan_depth", cases, err, 0.0);
}

}  // namespace

std::vector<SuiteResult> run_verify_suites(std::uint64_t seed, const ScanSettings& scan) {
  std::mt19937_64 rng(seed);
  std::vector<SuiteResult> out;
  out.push_back(kkt_suite(rng));
  out.push_back(scan_suite(rng, scan));
  out.push_back(associativity_suite(rng));
  out.push_back(identity_suite(rng));
  out.push_back(barrier_suite());
  out.push_back(jacobian_suite(rng));
  out.push_back(depth_suite(scan));
  return out;
}

}  // namespace pdilqr::harness
