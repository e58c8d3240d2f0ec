#include "pdilqr/models/srbd.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/AutoDiff>

namespace pdilqr::models {

namespace {

using AD = Eigen::AutoDiffScalar<Eigen::Matrix<double, kSrbdStates + kSrbdInputs, 1>>;

inline double value_of(double s) { return s; }
inline double value_of(const AD& s) { return s.value(); }

template <class S>
using Vec12 = Eigen::Matrix<S, 12, 1>;

template <class S>
Vec12<S> rhs(const Vec12<S>& x, const Vec12<S>& u, const RobotParams& params, const Eigen::Matrix3d& inertia_inv,
             const Footholds& footholds, const Contacts& contacts, const Eigen::Vector3d& external) {
  using std::cos;
  using std::sin;
  using V3 = Eigen::Matrix<S, 3, 1>;
  using M3 = Eigen::Matrix<S, 3, 3>;

  const double pitch = value_of(x(4));
  if (!(std::abs(pitch) < kPitchGuard)) {
    throw SolverError("srbd: pitch " + std::to_string(pitch) + " outside the Euler singularity guard");
  }

  const V3 p = x.template segment<3>(0);
  const V3 v = x.template segment<3>(6);
  const V3 w = x.template segment<3>(9);
  const S cr = cos(x(3)), sr = sin(x(3));
  const S cp = cos(x(4)), sp = sin(x(4));
  const S cy = cos(x(5)), sy = sin(x(5));

  M3 R;
  R << cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,  //
      sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,   //
      -sp, cp * sr, cp * cr;

  V3 force = external.cast<S>();
  force(2) -= params.mass * params.gravity;
  V3 torque = V3::Zero();
  for (int j = 0; j < kLegs; ++j) {
    if (!contacts[j]) continue;
    const V3 f = u.template segment<3>(3 * j);
    force += f;
    const V3 r = footholds[j].cast<S>() - p;
    torque += r.cross(f);
  }

  const M3 I = params.inertia.cast<S>();
  const V3 Iw = I * w;
  const V3 body_torque = R.transpose() * torque - w.cross(Iw);

  Vec12<S> xdot;
  xdot.template segment<3>(0) = v;
  const S tp = sp / cp;
  xdot(3) = w(0) + sr * tp * w(1) + cr * tp * w(2);
  xdot(4) = cr * w(1) - sr * w(2);
  xdot(5) = (sr * w(1) + cr * w(2)) / cp;
  xdot.template segment<3>(6) = force / params.mass;
  xdot.template segment<3>(9) = inertia_inv.cast<S>() * body_torque;
  return xdot;
}

void check_sizes(const Vector& x, const Vector& u) {
  if (x.size() != kSrbdStates || u.size() != kSrbdInputs) {
    throw std::invalid_argument("srbd: expected 12 states and 12 inputs");
  }
}

}  // namespace

void RobotParams::validate() const {
  if (!(mass > 0.0)) throw std::invalid_argument("RobotParams: mass must be positive");
  if (!inertia.isApprox(inertia.transpose(), 1e-12)) throw std::invalid_argument("RobotParams: inertia not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(inertia);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) throw std::invalid_argument("RobotParams: inertia not positive definite");
  if (!(friction > 0.0)) throw std::invalid_argument("RobotParams: friction must be positive");
  if (!(fz_min < fz_max)) throw std::invalid_argument("RobotParams: need fz_min < fz_max");
}

Eigen::Vector3d SrbdReference::position(double t) const {
  const Eigen::Vector2d xy = origin + velocity * t;
  return {xy.x(), xy.y(), height};
}

Vector srbd_state(const Eigen::Vector3d& p, const Eigen::Vector3d& rpy, const Eigen::Vector3d& v,
                  const Eigen::Vector3d& omega) {
  Vector x(kSrbdStates);
  x << p, rpy, v, omega;
  return x;
}

Vector srbd_nominal_state(const SrbdReference& ref, double t) {
  return srbd_state(ref.position(t), Eigen::Vector3d(0.0, 0.0, ref.yaw),
                    Eigen::Vector3d(ref.velocity.x(), ref.velocity.y(), 0.0), Eigen::Vector3d::Zero());
}

Vector srbd_dynamics(const Vector& x, const Vector& u, const RobotParams& params, const Footholds& footholds,
                     const Contacts& contacts, const Eigen::Vector3d& external) {
  check_sizes(x, u);
  const Vec12<double> xs = x;
  const Vec12<double> us = u;
  return rhs<double>(xs, us, params, params.inertia.inverse(), footholds, contacts, external);
}

ContinuousEval srbd_continuous(const Vector& x, const Vector& u, const RobotParams& params,
                               const Footholds& footholds, const Contacts& contacts, bool jacobians,
                               const Eigen::Vector3d& external) {
  check_sizes(x, u);
  const Eigen::Matrix3d inertia_inv = params.inertia.inverse();
  ContinuousEval e;
  if (!jacobians) {
    e.xdot = rhs<double>(x, u, params, inertia_inv, footholds, contacts, external);
    return e;
  }
  constexpr int nz = kSrbdStates + kSrbdInputs;
  Vec12<AD> xa, ua;
  for (int i = 0; i < kSrbdStates; ++i) xa(i) = AD(x(i), nz, i);
  for (int i = 0; i < kSrbdInputs; ++i) ua(i) = AD(u(i), nz, kSrbdStates + i);
  const Vec12<AD> out = rhs<AD>(xa, ua, params, inertia_inv, footholds, contacts, external);
  e.xdot.resize(kSrbdStates);
  e.dx.resize(kSrbdStates, kSrbdStates);
  e.du.resize(kSrbdStates, kSrbdInputs);
  for (int r = 0; r < kSrbdStates; ++r) {
    e.xdot(r) = out(r).value();
    const auto& d = out(r).derivatives();
    e.dx.row(r) = d.head<kSrbdStates>().transpose();
    e.du.row(r) = d.tail<kSrbdInputs>().transpose();
  }
  return e;
}

Footholds plan_footholds(const GaitSchedule& gait, const RobotParams& params, const FootholdPlan& plan, double t) {
  const Contacts at_start = gait.contacts(plan.t0);
  const double half_stance = 0.5 * gait.stance_duration();
  Footholds out;
  for (int j = 0; j < kLegs; ++j) {
    const double ts = gait.stance_start(j, t);
    if (plan.latched && at_start[j] && std::abs(ts - gait.stance_start(j, plan.t0)) < 1e-9) {
      out[j] = (*plan.latched)[j];
      continue;
    }
    const Eigen::Vector2d xy =
        plan.anchor + plan.velocity * (ts + half_stance - plan.t0) + params.stance_offsets[j].head<2>();
    out[j] = Eigen::Vector3d(xy.x(), xy.y(), 0.0);
  }
  return out;
}

std::vector<double> friction_margins(const Vector& u, const Contacts& contacts, const RobotParams& params) {
  std::vector<double> out;
  for (int j = 0; j < kLegs; ++j) {
    if (!contacts[j]) continue;
    const double fx = u(3 * j), fy = u(3 * j + 1), fz = u(3 * j + 2);
    const double mf = params.friction * fz;
    out.insert(out.end(), {mf - fx, mf + fx, mf - fy, mf + fy, fz - params.fz_min, params.fz_max - fz});
  }
  return out;
}

OCPDef srbd_ocp(int horizon, double dt, const RobotParams& params, const GaitSchedule& gait,
                const SrbdReference& ref, const FootholdPlan& plan, const Vector& x0, const SrbdWeights& weights) {
  if (dt <= 0.0) throw std::invalid_argument("srbd_ocp: dt must be positive");
  if (horizon < 0) throw std::invalid_argument("srbd_ocp: negative horizon");
  if (x0.size() != kSrbdStates) throw std::invalid_argument("srbd_ocp: x0 must have 12 entries");
  params.validate();
  gait.validate();

  struct NodeData {
    Contacts contacts;
    Footholds footholds;
    Vector x_ref;
    Vector f_ref;
  };
  auto nodes = std::make_shared<std::vector<NodeData>>(horizon + 2);
  for (int i = 0; i <= horizon + 1; ++i) {
    const double t = plan.t0 + i * dt;
    NodeData& nd = (*nodes)[i];
    nd.contacts = gait.contacts(t);
    nd.footholds = plan_footholds(gait, params, plan, t);
    nd.x_ref = srbd_nominal_state(ref, t);
    int n_contact = 0;
    for (bool c : nd.contacts) n_contact += c ? 1 : 0;
    nd.f_ref = Vector::Zero(kSrbdInputs);
    for (int j = 0; j < kLegs; ++j) {
      if (nd.contacts[j]) nd.f_ref(3 * j + 2) = params.mass * params.gravity / n_contact;
    }
  }

  OCPDef ocp;
  ocp.horizon = horizon;
  ocp.nx = kSrbdStates;
  ocp.nu = kSrbdInputs;
  ocp.x0 = x0;

  ocp.dynamics = [nodes, params, dt](int i, const Vector& x, const Vector& u, bool jac) {
    const NodeData& nd = (*nodes)[i];
    ContinuousDynamics f = [&](const Vector& xs, const Vector& us, bool j) {
      return srbd_continuous(xs, us, params, nd.footholds, nd.contacts, j);
    };
    return rk4_step(f, x, u, dt, jac);
  };

  constexpr int nr = kSrbdStates + kSrbdInputs;
  ocp.stage_residual = [nodes](int i, const Vector& x, const Vector& u, bool jac) {
    const NodeData& nd = (*nodes)[i];
    ResidualEval r;
    r.value.resize(nr);
    r.value << x - nd.x_ref, u - nd.f_ref;
    if (jac) {
      r.dx = Matrix::Zero(nr, kSrbdStates);
      r.dx.topRows(kSrbdStates).setIdentity();
      r.du = Matrix::Zero(nr, kSrbdInputs);
      r.du.bottomRows(kSrbdInputs).setIdentity();
    }
    return r;
  };

  Vector w_state(kSrbdStates);
  w_state << weights.position_xy, weights.position_xy, weights.height, weights.orientation, weights.velocity,
      weights.angular_rate;
  ocp.stage_weight.resize(horizon + 1);
  for (int i = 0; i <= horizon; ++i) {
    Vector w(nr);
    w.head(kSrbdStates) = w_state;
    for (int j = 0; j < kLegs; ++j) {
      w.segment<3>(kSrbdStates + 3 * j).setConstant((*nodes)[i].contacts[j] ? weights.force : weights.swing_force);
    }
    ocp.stage_weight[i] = w.asDiagonal().toDenseMatrix();
  }

  const int terminal = horizon + 1;
  ocp.terminal_residual = [nodes, terminal](const Vector& x, bool jac) {
    ResidualEval r{x - (*nodes)[terminal].x_ref, {}, {}};
    if (jac) {
      r.dx = Matrix::Identity(kSrbdStates, kSrbdStates);
      r.du = Matrix::Zero(kSrbdStates, 0);
    }
    return r;
  };
  ocp.terminal_weight = (weights.terminal_scale * w_state).asDiagonal().toDenseMatrix();

  const double mu = weights.barrier_mu;
  const double delta = weights.barrier_delta;
  ocp.stage_constraints = [nodes, params, mu, delta](int i, const Vector&, const Vector& u, bool jac) {
    const NodeData& nd = (*nodes)[i];
    const std::vector<double> xi = friction_margins(u, nd.contacts, params);
    std::vector<ConstraintEval> cs(xi.size());
    int k = 0;
    for (int j = 0; j < kLegs; ++j) {
      if (!nd.contacts[j]) continue;
      // d xi / d (fx, fy, fz) for the six margins of this foot
      static constexpr double grad[6][3] = {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, -1}};
      for (int c = 0; c < 6; ++c, ++k) {
        cs[k].value = xi[k];
        cs[k].mu = mu;
        cs[k].delta = delta;
        if (jac) {
          cs[k].dx = Vector::Zero(kSrbdStates);
          cs[k].du = Vector::Zero(kSrbdInputs);
          cs[k].du(3 * j) = grad[c][0];
          cs[k].du(3 * j + 1) = grad[c][1];
          cs[k].du(3 * j + 2) = grad[c][2] + (c < 4 ? params.friction : 0.0);
        }
      }
    }
    return cs;
  };
  return ocp;
}

}  // namespace pdilqr::models
