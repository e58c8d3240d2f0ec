#pragma once

// Real-time-iteration MPC of the rigid-body quadruped against an RK4 plant of
// the same model.

#include <string>
#include <vector>

#include "pdilqr/models/srbd.hpp"
#include "pdilqr/sqp.hpp"

namespace pdilqr {

struct Disturbance {
  double start = 0.0;
  double duration = 0.0;
  Eigen::Vector3d force = Eigen::Vector3d::Zero();  // world frame [N]

  bool active(double t) const { return duration > 0.0 && t >= start - 1e-12 && t < start + duration - 1e-12; }
};

struct ClosedLoopConfig {
  int horizon = 50;
  double dt = 0.02;
  double duration = 4.0;
  Eigen::Vector2d command = Eigen::Vector2d(0.3, 0.0);
  double height = 0.30;
  models::RobotParams robot;
  models::GaitSchedule gait;
  models::SrbdWeights weights;
  Disturbance disturbance;
  SolverOptions solver;
  int warmup_iters = 20;  // full SQP iterations on the first problem only
  double warmup_tol = 1e-6;
  bool rti = true;  // false: iterate to warmup_tol (at most warmup_iters) every step
  // Also run the RTI iterate from the unshifted previous solution and record its theta.
  bool compare_unshifted = false;
};

struct ClosedLoopStep {
  double t = 0.0;
  Vector x;          // plant state at t
  Vector u;          // applied input
  double theta = 0.0;
  double cost = 0.0;
  double alpha = 0.0;
  bool accepted = false;
  double min_margin = 0.0;  // smallest friction/force barrier argument over the accepted plan
  bool pushed = false;
  double theta_unshifted = 0.0;  // only with compare_unshifted
};

struct ClosedLoopResult {
  std::vector<ClosedLoopStep> steps;
  Vector final_state;
  bool aborted = false;
  std::string error;
};

/// Throws nothing on model guard violations: they end the run with aborted = true.
ClosedLoopResult run_closed_loop(const ClosedLoopConfig& config);

struct ClosedLoopSummary {
  double mean_velocity_error = 0.0;  // mean |v_xy - command| over all steps
  double recovery_time = -1.0;       // after the push ends; -1 if never recovered
  double min_margin = 0.0;
  double max_position_drift = 0.0;   // max |p_xy(t) - reference_xy(t)|
  int rejected_steps = 0;
};

/// recovery: time after the push end from which |v_xy - command| stays
/// below `band` for the rest of the run.
ClosedLoopSummary summarize(const ClosedLoopConfig& config, const ClosedLoopResult& result, double band = 0.1);

}  // namespace pdilqr
