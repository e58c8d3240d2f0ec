#pragma once

// Single-rigid-body quadruped driven by ground reaction forces.
//
// State (12): p world position, Theta = (roll, pitch, yaw) ZYX Euler angles,
//             v world linear velocity, omega body angular velocity.
// Input (12): world-frame force f_j of each foot, legs ordered FL, FR, RL, RR.

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "pdilqr/models/gait.hpp"
#include "pdilqr/models/integrators.hpp"
#include "pdilqr/ocp.hpp"

namespace pdilqr::models {

inline constexpr int kSrbdStates = 12;
inline constexpr int kSrbdInputs = 3 * kLegs;
inline constexpr double kPitchGuard = 1.5707963267948966 - 0.1;

using Footholds = std::array<Eigen::Vector3d, kLegs>;

struct RobotParams {
  double mass = 15.0;
  Eigen::Matrix3d inertia = Eigen::Vector3d(0.11, 0.32, 0.36).asDiagonal();
  // Hip positions projected to the ground, relative to the base.
  Footholds stance_offsets{Eigen::Vector3d(0.19, 0.14, 0.0), Eigen::Vector3d(0.19, -0.14, 0.0),
                           Eigen::Vector3d(-0.19, 0.14, 0.0), Eigen::Vector3d(-0.19, -0.14, 0.0)};
  double friction = 0.5;
  double fz_min = 2.0;
  double fz_max = 250.0;
  double gravity = 9.81;

  /// Throws std::invalid_argument unless mass > 0 and inertia is SPD.
  void validate() const;
};

/// Straight-line base reference: xy moves with `velocity` from `origin`,
/// height and heading are held.
struct SrbdReference {
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
  double height = 0.30;
  double yaw = 0.0;

  Eigen::Vector3d position(double t) const;
};

struct SrbdWeights {
  double position_xy = 20.0;
  double height = 200.0;
  Eigen::Vector3d orientation{100.0, 100.0, 50.0};
  Eigen::Vector3d velocity{10.0, 10.0, 10.0};
  Eigen::Vector3d angular_rate{1.0, 1.0, 1.0};
  double force = 1e-4;   // toward the even mg / n_contact split
  double swing_force = 1e3;
  double terminal_scale = 5.0;
  double barrier_mu = 0.1;
  double barrier_delta = 1.0;
};

Vector srbd_state(const Eigen::Vector3d& p, const Eigen::Vector3d& rpy, const Eigen::Vector3d& v,
                  const Eigen::Vector3d& omega);

/// Continuous-time derivative; swing-foot forces do not act. `external` is a
/// world-frame force on the base (plant disturbances). Throws SolverError
/// when |pitch| >= kPitchGuard.
Vector srbd_dynamics(const Vector& x, const Vector& u, const RobotParams& params, const Footholds& footholds,
                     const Contacts& contacts, const Eigen::Vector3d& external = Eigen::Vector3d::Zero());

/// Same, with exact Jacobians from forward-mode automatic differentiation.
ContinuousEval srbd_continuous(const Vector& x, const Vector& u, const RobotParams& params,
                               const Footholds& footholds, const Contacts& contacts, bool jacobians,
                               const Eigen::Vector3d& external = Eigen::Vector3d::Zero());

/// Foothold source for one solve. A leg lands at anchor + velocity * (middle
/// of its stance - t0) plus its nominal offset. Legs already in stance at t0
/// keep their latched position for the rest of that stance when given.
struct FootholdPlan {
  Eigen::Vector2d anchor = Eigen::Vector2d::Zero();  // base xy at t0
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
  double t0 = 0.0;
  std::optional<Footholds> latched;
};

Footholds plan_footholds(const GaitSchedule& gait, const RobotParams& params, const FootholdPlan& plan, double t);

/// Tracking MPC problem starting at time t0 = plan.t0 from state x0, one node
/// per dt. plan.anchor is normally the xy of x0.
OCPDef srbd_ocp(int horizon, double dt, const RobotParams& params, const GaitSchedule& gait,
                const SrbdReference& ref, const FootholdPlan& plan, const Vector& x0,
                const SrbdWeights& weights = {});

/// Nominal standing state over the reference at time t.
Vector srbd_nominal_state(const SrbdReference& ref, double t);

/// Per-contact barrier arguments (6 per stance foot) of one input.
std::vector<double> friction_margins(const Vector& u, const Contacts& contacts, const RobotParams& params);

}  // namespace pdilqr::models
