#include "pdilqr/ocp.hpp"

#include <stdexcept>

namespace pdilqr {

void OCPDef::validate() const {
  if (horizon < 0 || nx < 1 || nu < 1) throw std::invalid_argument("OCPDef: bad dimensions");
  if (x0.size() != nx) throw std::invalid_argument("OCPDef: x0 has wrong size");
  if (!dynamics || !stage_residual || !terminal_residual) {
    throw std::invalid_argument("OCPDef: dynamics and residual callbacks are required");
  }
  if (static_cast<int>(stage_weight.size()) != horizon + 1) {
    throw std::invalid_argument("OCPDef: need one stage weight per node");
  }
  for (const auto& W : stage_weight) {
    if (W.rows() != W.cols() || !W.isApprox(W.transpose(), 1e-12)) {
      throw std::invalid_argument("OCPDef: stage weight not symmetric");
    }
  }
  if (terminal_weight.rows() != terminal_weight.cols() ||
      !terminal_weight.isApprox(terminal_weight.transpose(), 1e-12)) {
    throw std::invalid_argument("OCPDef: terminal weight not symmetric");
  }
}

bool Trajectory::all_finite() const {
  for (const auto& v : x)
    if (!v.allFinite()) return false;
  for (const auto& v : u)
    if (!v.allFinite()) return false;
  for (const auto& v : lambda)
    if (!v.allFinite()) return false;
  return true;
}

Trajectory constant_guess(const OCPDef& ocp) {
  Trajectory t;
  t.x.assign(ocp.horizon + 2, ocp.x0);
  t.u.assign(ocp.horizon + 1, Vector::Zero(ocp.nu));
  t.lambda.assign(ocp.horizon + 2, Vector::Zero(ocp.nx));
  return t;
}

Trajectory rollout(const OCPDef& ocp, const std::vector<Vector>& controls) {
  if (static_cast<int>(controls.size()) != ocp.horizon + 1) {
    throw std::invalid_argument("rollout: need one control per node");
  }
  Trajectory t;
  t.u = controls;
  t.x.resize(ocp.horizon + 2);
  t.x[0] = ocp.x0;
  for (int i = 0; i <= ocp.horizon; ++i) t.x[i + 1] = ocp.dynamics(i, t.x[i], t.u[i], false).next;
  t.lambda.assign(ocp.horizon + 2, Vector::Zero(ocp.nx));
  return t;
}

namespace {

void shift(std::vector<Vector>& seq) {
  if (seq.size() < 2) return;
  for (size_t i = 0; i + 1 < seq.size(); ++i) seq[i] = seq[i + 1];
}

}  // namespace

Trajectory warm_start_shift(const Trajectory& traj) {
  Trajectory out = traj;
  shift(out.x);
  shift(out.u);
  shift(out.lambda);
  return out;
}

}  // namespace pdilqr
