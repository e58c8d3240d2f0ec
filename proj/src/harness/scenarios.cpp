#include "pdilqr/harness/scenarios.hpp"

#include <random>

#include "pdilqr/models/toy_models.hpp"

namespace pdilqr::harness {

namespace {

double gauss(std::mt19937_64* rng, double sigma) {
  if (!rng) return 0.0;
  std::normal_distribution<double> d(0.0, sigma);
  return d(*rng);
}

Trajectory stack(const std::vector<Trajectory>& parts) {
  Trajectory out;
  const auto& first = parts.front();
  auto cat = [&](auto member, std::size_t len) {
    std::vector<Vector> res(len);
    for (std::size_t i = 0; i < len; ++i) {
      Eigen::Index n = 0;
      for (const auto& p : parts) n += (p.*member)[i].size();
      res[i].resize(n);
      Eigen::Index off = 0;
      for (const auto& p : parts) {
        const Vector& v = (p.*member)[i];
        res[i].segment(off, v.size()) = v;
        off += v.size();
      }
    }
    return res;
  };
  out.x = cat(&Trajectory::x, first.x.size());
  out.u = cat(&Trajectory::u, first.u.size());
  out.lambda = cat(&Trajectory::lambda, first.lambda.size());
  return out;
}

Problem compose(std::vector<Problem> parts, const std::optional<models::Coupling>& coupling) {
  Problem out;
  std::vector<OCPDef> ocps;
  std::vector<Trajectory> guesses;
  for (auto& p : parts) {
    ocps.push_back(std::move(p.ocp));
    guesses.push_back(std::move(p.guess));
    out.robot_nx.push_back(p.robot_nx.front());
    out.robot_nu.push_back(p.robot_nu.front());
  }
  out.ocp = models::compose_multi_robot(ocps, coupling);
  out.guess = stack(guesses);
  return out;
}

}  // namespace

Problem srbd_problem(const RunConfig& config, const Eigen::Vector2d& origin, const Eigen::Vector2d& velocity,
                     std::mt19937_64* rng) {
  const int N = config.resolved_horizon();
  const double dt = config.resolved_dt();
  models::SrbdReference ref;
  ref.origin = origin;
  ref.velocity = velocity;
  ref.height = config.height;

  Vector x0 = models::srbd_nominal_state(ref, 0.0);
  x0(0) += gauss(rng, 0.02);
  x0(1) += gauss(rng, 0.02);
  x0(6) += gauss(rng, 0.05);
  x0(7) += gauss(rng, 0.05);

  models::FootholdPlan plan;
  plan.anchor = x0.head<2>();
  plan.velocity = velocity;
  plan.t0 = 0.0;

  Problem p;
  p.ocp = models::srbd_ocp(N, dt, config.robot, config.gait, ref, plan, x0, config.weights);
  p.robot_nx = {models::kSrbdStates};
  p.robot_nu = {models::kSrbdInputs};

  Trajectory& g = p.guess;
  g.x.resize(N + 2);
  g.u.resize(N + 1);
  g.lambda.assign(N + 2, Vector::Zero(models::kSrbdStates));
  for (int i = 0; i <= N + 1; ++i) g.x[i] = models::srbd_nominal_state(ref, i * dt);
  g.x[0] = x0;
  for (int i = 0; i <= N; ++i) {
    const models::Contacts c = config.gait.contacts(i * dt);
    int nc = 0;
    for (bool b : c) nc += b ? 1 : 0;
    g.u[i] = Vector::Zero(models::kSrbdInputs);
    for (int j = 0; j < models::kLegs; ++j)
      if (c[j]) g.u[i](3 * j + 2) = config.robot.mass * config.robot.gravity / nc;
  }
  return p;
}

Problem crossing_problem(const RunConfig& config, std::mt19937_64* rng) {
  const double speed = 0.5;
  const double reach = 0.5 * speed * config.resolved_horizon() * config.resolved_dt();  // meet mid-horizon
  std::vector<Problem> parts;
  parts.push_back(srbd_problem(config, Eigen::Vector2d(-reach, 0.0), Eigen::Vector2d(speed, 0.0), rng));
  parts.push_back(srbd_problem(config, Eigen::Vector2d(0.0, -reach), Eigen::Vector2d(0.0, speed), rng));
  return compose(std::move(parts), config.coupling ? config.coupling : models::Coupling{});
}

Problem multi_problem(const RunConfig& config, int robots, std::mt19937_64* rng) {
  std::vector<Problem> parts;
  for (int k = 0; k < robots; ++k) parts.push_back(srbd_problem(config, Eigen::Vector2d(0.0, 1.0 * k), config.command, rng));
  return compose(std::move(parts), config.coupling);
}

Problem build_problem(const RunConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int N = config.resolved_horizon();
  const double dt = config.resolved_dt();
  switch (config.model) {
    case ModelKind::double_integrator: {
      Vector x0(4);
      x0 << 1.0 + gauss(&rng, 0.5), -1.0 + gauss(&rng, 0.5), 0.0, 0.0;
      Problem p;
      p.ocp = models::double_integrator_ocp(N, dt, x0, Vector::Zero(4));
      p.guess = constant_guess(p.ocp);
      p.robot_nx = {4};
      p.robot_nu = {2};
      return p;
    }
    case ModelKind::pendulum: {
      Vector x0(2);
      x0 << gauss(&rng, 0.05), 0.0;
      Problem p;
      p.ocp = models::pendulum_ocp(N, dt, x0);
      p.guess = models::pendulum_guess(p.ocp, dt);
      p.robot_nx = {2};
      p.robot_nu = {1};
      return p;
    }
    case ModelKind::srbd:
      return srbd_problem(config, Eigen::Vector2d::Zero(), config.command, &rng);
    case ModelKind::srbd_multi:
      return multi_problem(config, config.robots, &rng);
    case ModelKind::crossing:
      return crossing_problem(config, &rng);
  }
  throw ConfigError("config: unsupported model");
}

Trajectory robot_trajectory(const Problem& problem, const Trajectory& stacked, int k) {
  Trajectory out;
  for (const auto& x : stacked.x) out.x.push_back(models::robot_block(x, problem.robot_nx, k));
  for (const auto& u : stacked.u) out.u.push_back(models::robot_block(u, problem.robot_nu, k));
  for (const auto& l : stacked.lambda) out.lambda.push_back(models::robot_block(l, problem.robot_nx, k));
  return out;
}

}  // namespace pdilqr::harness
