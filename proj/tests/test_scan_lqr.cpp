#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "pdilqr/checks.hpp"
#include "pdilqr/lqr_kernels.hpp"
#include "pdilqr/random_qp.hpp"
#include "pdilqr/scan_lqr.hpp"

using namespace pdilqr;

TEST_CASE("control-free node element") {
  std::mt19937_64 rng(1);
  QPData qp = random_qp(3, 3, 2, rng);
  qp.B[1].setZero();
  qp.S[1].setZero();
  const ValueElement e = stage_value_element(qp, 1);
  CHECK((e.A - qp.A[1]).norm() <= 1e-15);
  CHECK((e.P - qp.Q[1]).norm() <= 1e-15);
  CHECK(e.C.norm() == 0.0);
  CHECK((e.p - qp.q[1]).norm() <= 1e-15);
  CHECK((e.b - qp.b[1]).norm() <= 1e-15);
}

TEST_CASE("terminal element fields") {
  std::mt19937_64 rng(2);
  const QPData qp = random_qp(4, 3, 1, rng);
  const ValueElement t = terminal_value_element(qp);
  CHECK(t.A.norm() == 0.0);
  CHECK(t.C.norm() == 0.0);
  CHECK(t.b.norm() == 0.0);
  CHECK((t.P - qp.P_terminal).norm() == 0.0);
  CHECK((t.p - qp.p_terminal).norm() == 0.0);
  const auto elems = init_value_elements(qp);
  CHECK(elems.size() == 5);
  CHECK(elems.back().A.norm() == 0.0);
  CHECK(elems.back().C.norm() == 0.0);
}

TEST_CASE("scalar stage element") {
  const QPData qp = testutil::scalar_one_step();
  const ValueElement e = stage_value_element(qp, 0);
  CHECK(e.A(0, 0) == 1.0);
  CHECK(e.P(0, 0) == 1.0);
  CHECK(e.C(0, 0) == 1.0);
  CHECK(e.p(0) == 0.0);
  CHECK(e.b(0) == 0.0);
}

TEST_CASE("singular R names node") {
  std::mt19937_64 rng(3);
  QPData qp = random_qp(4, 2, 1, rng);
  qp.R[2].setZero();
  try {
    stage_value_element(qp, 2);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.node() == 2);
  }
}

TEST_CASE("combine with identity") {
  std::mt19937_64 rng(4);
  for (int n = 1; n <= 6; ++n) {
    const ValueElement a = random_value_element(n, rng);
    CHECK(element_deviation(combine(a, ValueElement::identity(n)), a) <= 1e-12);
  }
}

TEST_CASE("combine of control-free elements") {
  std::mt19937_64 rng(5);
  const int n = 3;
  ValueElement a = random_value_element(n, rng), b = random_value_element(n, rng);
  a.C.setZero();
  b.C.setZero();
  const ValueElement ab = combine(a, b);
  CHECK((ab.A - b.A * a.A).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((ab.P - (a.P + a.A.transpose() * b.P * a.A)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(ab.C.cwiseAbs().maxCoeff() <= 1e-12);

  // Two-step Riccati with B = 0 gives the same cost-to-go at node 0.
  QPData qp = QPData::zeros(1, n, 1);
  for (int i = 0; i < 2; ++i) {
    qp.A[i] = Matrix::NullaryExpr(n, n, [&](Eigen::Index, Eigen::Index) {
      return std::uniform_real_distribution<double>(-0.5, 0.5)(rng);
    });
    qp.Q[i] = random_psd(n, rng);
    qp.R[i] = Matrix::Identity(1, 1);
    qp.b[i] = Vector::Random(n);
    qp.q[i] = Vector::Random(n);
  }
  qp.P_terminal = random_psd(n, rng);
  qp.p_terminal = Vector::Random(n);
  const auto elems = init_value_elements(qp);
  const ValueElement total = combine(elems[0], elems[1]);
  const Policy pol = riccati_backward(qp);
  CHECK((total.P - pol.P[0]).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((total.p - pol.p[0]).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("combine associativity") {
  std::mt19937_64 rng(6);
  for (int c = 0; c < 100; ++c) {
    const int n = 1 + c % 8;
    const ValueElement a = random_value_element(n, rng), b = random_value_element(n, rng),
                       d = random_value_element(n, rng);
    CHECK(element_deviation(combine(combine(a, b), d), combine(a, combine(b, d))) <= 1e-10);
    for (const Matrix& M : {combine(a, b).P, combine(a, b).C})
      CHECK((M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("backward scan N = 0 and scalar") {
  const QPData qp = testutil::scalar_one_step(1.0);
  for (ScanMode mode : {ScanMode::sequential, ScanMode::tree}) {
    ScanSettings s;
    s.mode = mode;
    const Policy pol = backward_scan(qp, s);
    CHECK(pol.P[0](0, 0) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(pol.K[0](0, 0) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(pol.P[1](0, 0) == 1.0);
  }
}

TEST_CASE("backward scan n=8 m=4 N=128") {
  std::mt19937_64 rng(7);
  const QPData qp = random_qp(128, 8, 4, rng);
  const Policy seq = riccati_backward(qp);
  int depth = 0;
  const Policy tree = backward_scan(qp, {}, &depth);
  CHECK(relative_deviation(tree.P, seq.P) <= 1e-8);
  CHECK(relative_deviation(tree.p, seq.p) <= 1e-8);
  CHECK(relative_deviation(tree.K, seq.K) <= 1e-8);
  CHECK(relative_deviation(tree.k, seq.k) <= 1e-8);
  CHECK(depth <= 2 * ceil_log2(129));
}

TEST_CASE("traj elements") {
  std::mt19937_64 rng(8);
  const QPData qp = random_qp(6, 3, 2, rng);
  Policy pol = riccati_backward(qp);
  for (auto& K : pol.K) K.setZero();
  for (auto& k : pol.k) k.setZero();
  const auto open = init_traj_elements(qp, pol);
  for (int i = 1; i <= 6; ++i) {
    CHECK((open[i].A - qp.A[i]).norm() == 0.0);
    CHECK((open[i].b - qp.b[i]).norm() == 0.0);
  }
  CHECK(open[0].A.norm() == 0.0);

  QPData z = qp;
  z.dx0.setZero();
  const Policy zp = riccati_backward(z);
  const auto elems = init_traj_elements(z, zp);
  CHECK((elems[0].b - (z.B[0] * zp.k[0] + z.b[0])).norm() <= 1e-15);

  const QPData s = testutil::scalar_one_step(1.0);
  const auto se = init_traj_elements(s, riccati_backward(s));
  CHECK(se[0].A(0, 0) == 0.0);
  CHECK(se[0].b(0) == doctest::Approx(0.5));
}

TEST_CASE("combine_traj") {
  TrajElement a{Matrix::Constant(1, 1, 2.0), Vector::Constant(1, 3.0)};
  TrajElement b{Matrix::Constant(1, 1, 5.0), Vector::Constant(1, 7.0)};
  const TrajElement ab = combine_traj(a, b);
  CHECK(ab.A(0, 0) == 10.0);
  CHECK(ab.b(0) == 5.0 * 3.0 + 7.0);

  std::mt19937_64 rng(9);
  for (int n = 1; n <= 5; ++n) {
    const TrajElement e = random_traj_element(n, rng);
    CHECK(element_deviation(combine_traj(e, TrajElement::identity(n)), e) <= 1e-12);
    CHECK(element_deviation(combine_traj(TrajElement::identity(n), e), e) <= 1e-12);
  }

  // Chains of length 8: scan equals iterated application.
  for (int c = 0; c < 20; ++c) {
    const int n = 1 + c % 4;
    std::vector<TrajElement> chain;
    for (int i = 0; i < 8; ++i) chain.push_back(random_traj_element(n, rng));
    ScanPlan plan;
    const auto out = inclusive_scan(chain, combine_traj, plan, std::optional<TrajElement>(TrajElement::identity(n)));
    const Vector x0 = Vector::Random(n);
    Vector x = x0;
    for (int i = 0; i < 8; ++i) {
      x = chain[i].A * x + chain[i].b;
      CHECK((out[i].A * x0 + out[i].b - x).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("forward scan") {
  std::mt19937_64 rng(10);
  QPData qp = random_qp(9, 3, 2, rng);
  Policy pol = riccati_backward(qp);
  for (auto& k : pol.k) k.setZero();
  for (auto& b : qp.b) b.setZero();
  qp.dx0.setZero();
  CHECK(max_abs(forward_scan(qp, pol).dx) == 0.0);

  const QPData s = testutil::scalar_one_step(1.0);
  CHECK(forward_scan(s, riccati_backward(s)).dx[1](0) == doctest::Approx(0.5));

  const QPData big = random_qp(256, 4, 2, rng);
  const Policy bp = riccati_backward(big);
  int depth = 0;
  const Direction a = forward_scan(big, bp, {}, &depth);
  const Direction b = forward_rollout(big, bp);
  CHECK(relative_deviation(a.dx, b.dx) <= 1e-10);
  CHECK(relative_deviation(a.du, b.du) <= 1e-10);
  CHECK(depth <= 2 * ceil_log2(257));
}

TEST_CASE("backend equivalence across shapes") {
  std::mt19937_64 rng(11);
  for (int N : {0, 1, 7, 33})
    for (int n : {1, 3, 6})
      for (ScanMode mode : {ScanMode::sequential, ScanMode::tree}) {
        const QPData qp = random_qp(N, n, 1 + n / 2, rng);
        ScanSettings s;
        s.mode = mode;
        s.workers = 2;
        CHECK(direction_deviation(solve_lqr_scan(qp, s), solve_lqr_sequential(qp)) <= 1e-8);
      }
}

TEST_CASE("corrupt combine is detected") {
  std::mt19937_64 rng(12);
  const QPData qp = random_qp(16, 3, 2, rng);
  ScanSettings s;
  s.corrupt_combine = true;
  CHECK(direction_deviation(solve_lqr_scan(qp, s), solve_lqr_sequential(qp)) > 1e-6);
}
