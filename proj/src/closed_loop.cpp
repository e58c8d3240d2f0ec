#include "pdilqr/closed_loop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdilqr {

using models::Contacts;
using models::Footholds;
using models::kLegs;

namespace {

double min_contact_margin(const Trajectory& traj, const ClosedLoopConfig& cfg, double t0) {
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < static_cast<int>(traj.u.size()); ++i) {
    const Contacts c = cfg.gait.contacts(t0 + i * cfg.dt);
    for (double xi : models::friction_margins(traj.u[i], c, cfg.robot)) lo = std::min(lo, xi);
  }
  return lo;
}

Vector plant_step(const ClosedLoopConfig& cfg, const Vector& x, const Vector& u, const Footholds& feet,
                  const Contacts& contacts, const Eigen::Vector3d& external) {
  const models::ContinuousDynamics f = [&](const Vector& xs, const Vector& us, bool) {
    return models::ContinuousEval{models::srbd_dynamics(xs, us, cfg.robot, feet, contacts, external), {}, {}};
  };
  return models::rk4_step(f, x, u, cfg.dt, false).next;
}

}  // namespace

ClosedLoopResult run_closed_loop(const ClosedLoopConfig& cfg) {
  models::SrbdReference ref;
  ref.velocity = cfg.command;
  ref.height = cfg.height;

  ClosedLoopResult result;
  Vector x = models::srbd_nominal_state(ref, 0.0);
  x.segment<3>(6).setZero();  // start at rest

  const int steps = static_cast<int>(std::llround(cfg.duration / cfg.dt));
  Footholds latched{};
  Contacts previous{};
  Trajectory traj;

  for (int k = 0; k < steps; ++k) {
    const double t = k * cfg.dt;
    const Contacts contacts = cfg.gait.contacts(t);

    models::FootholdPlan plan;
    plan.anchor = x.head<2>();
    plan.velocity = cfg.command;
    plan.t0 = t;
    const Footholds predicted = models::plan_footholds(cfg.gait, cfg.robot, plan, t);
    for (int j = 0; j < kLegs; ++j) {
      if (contacts[j] && (k == 0 || !previous[j])) latched[j] = predicted[j];
    }
    plan.latched = latched;
    previous = contacts;

    ClosedLoopStep rec;
    rec.t = t;
    rec.x = x;
    try {
      const OCPDef ocp = models::srbd_ocp(cfg.horizon, cfg.dt, cfg.robot, cfg.gait, ref, plan, x, cfg.weights);
      if (k == 0) {
        Trajectory guess = constant_guess(ocp);
        for (int i = 0; i <= ocp.horizon; ++i) {
          const Contacts ci = cfg.gait.contacts(t + i * cfg.dt);
          int nc = 0;
          for (bool c : ci) nc += c ? 1 : 0;
          guess.u[i].setZero();
          for (int j = 0; j < kLegs; ++j)
            if (ci[j]) guess.u[i](3 * j + 2) = cfg.robot.mass * cfg.robot.gravity / nc;
        }
        traj = solve(ocp, guess, cfg.warmup_iters, cfg.warmup_tol, cfg.solver).traj;
      } else {
        if (cfg.compare_unshifted) rec.theta_unshifted = sqp_iterate(ocp, traj, cfg.solver).stats.theta_new;
        traj = warm_start_shift(traj);
      }
      if (cfg.rti || k == 0) {
        IterateResult it = sqp_iterate(ocp, traj, cfg.solver);
        traj = std::move(it.traj);
        rec.theta = it.stats.theta_new;
        rec.cost = it.stats.cost_new;
        rec.alpha = it.stats.alpha;
        rec.accepted = it.stats.accepted;
      } else {
        SolveResult sr = solve(ocp, traj, cfg.warmup_iters, cfg.warmup_tol, cfg.solver);
        traj = std::move(sr.traj);
        rec.theta = constraint_violation(ocp, traj);
        rec.cost = evaluate_cost(ocp, traj);
        rec.alpha = sr.stats.iterations.empty() ? 0.0 : sr.stats.iterations.back().alpha;
        rec.accepted = sr.stats.iterations.empty() || sr.stats.iterations.back().accepted;
      }
    } catch (const SolverError& e) {
      result.aborted = true;
      result.error = e.what();
      break;
    }
    rec.min_margin = min_contact_margin(traj, cfg, t);
    rec.u = traj.u[0];
    rec.pushed = cfg.disturbance.active(t);

    const Eigen::Vector3d external = rec.pushed ? cfg.disturbance.force : Eigen::Vector3d::Zero();
    try {
      x = plant_step(cfg, x, rec.u, latched, contacts, external);
    } catch (const SolverError& e) {
      result.steps.push_back(std::move(rec));
      result.aborted = true;
      result.error = e.what();
      break;
    }
    result.steps.push_back(std::move(rec));
  }
  result.final_state = x;
  return result;
}

ClosedLoopSummary summarize(const ClosedLoopConfig& cfg, const ClosedLoopResult& result, double band) {
  ClosedLoopSummary s;
  const auto& st = result.steps;
  if (st.empty()) return s;
  std::vector<double> err(st.size());
  s.min_margin = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < st.size(); ++k) {
    err[k] = (st[k].x.segment<2>(6) - cfg.command).norm();
    s.mean_velocity_error += err[k];
    s.min_margin = std::min(s.min_margin, st[k].min_margin);
    const Eigen::Vector2d ref_xy = cfg.command * st[k].t;
    s.max_position_drift = std::max(s.max_position_drift, (st[k].x.head<2>() - ref_xy).norm());
    if (!st[k].accepted) ++s.rejected_steps;
  }
  s.mean_velocity_error /= static_cast<double>(st.size());

  if (cfg.disturbance.duration > 0.0) {
    const double push_end = cfg.disturbance.start + cfg.disturbance.duration;
    long last_bad = -1;
    for (size_t k = 0; k < st.size(); ++k) {
      if (st[k].t >= push_end - 1e-12 && err[k] >= band) last_bad = static_cast<long>(k);
    }
    if (last_bad + 1 < static_cast<long>(st.size())) {
      const double t_ok = last_bad < 0 ? push_end : st[last_bad + 1].t;
      s.recovery_time = std::max(0.0, t_ok - push_end);
    }
  }
  return s;
}

}  // namespace pdilqr
