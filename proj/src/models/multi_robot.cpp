#include "pdilqr/models/multi_robot.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace pdilqr::models {

namespace {

struct Layout {
  std::vector<int> x_off, u_off, nx, nu;
  int x_total = 0, u_total = 0;
};

Layout make_layout(const std::vector<OCPDef>& robots) {
  Layout l;
  for (const auto& r : robots) {
    l.x_off.push_back(l.x_total);
    l.u_off.push_back(l.u_total);
    l.nx.push_back(r.nx);
    l.nu.push_back(r.nu);
    l.x_total += r.nx;
    l.u_total += r.nu;
  }
  return l;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Appends one coupling residual per pair; jacobian rows go to dx (w.r.t. the stacked state).
void append_coupling(const Coupling& c, const Layout& l, const Vector& x, bool jac, std::vector<double>& value,
                     std::vector<Vector>& rows) {
  const int k = static_cast<int>(l.nx.size());
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      const Vector diff =
          x.segment(l.x_off[a] + c.pos_index, c.pos_dim) - x.segment(l.x_off[b] + c.pos_index, c.pos_dim);
      const double dist = std::sqrt(diff.squaredNorm() + 1e-12);
      const double z = c.d_min - dist;
      value.push_back(softplus(z, c.sharpness));
      if (jac) {
        Vector row = Vector::Zero(l.x_total);
        const Vector g = -sigmoid(c.sharpness * z) * diff / dist;  // d eps / d p_a
        row.segment(l.x_off[a] + c.pos_index, c.pos_dim) = g;
        row.segment(l.x_off[b] + c.pos_index, c.pos_dim) = -g;
        rows.push_back(std::move(row));
      }
    }
  }
}

ResidualEval stack_residuals(const std::vector<ResidualEval>& parts, const Layout& l, bool jac, bool terminal,
                             const std::optional<Coupling>& coupling, const Vector& x) {
  std::vector<double> cv;
  std::vector<Vector> crows;
  if (coupling) append_coupling(*coupling, l, x, jac, cv, crows);

  int rows = static_cast<int>(cv.size());
  for (const auto& p : parts) rows += static_cast<int>(p.value.size());
  const int ucols = terminal ? 0 : l.u_total;

  ResidualEval out;
  out.value.resize(rows);
  if (jac) {
    out.dx = Matrix::Zero(rows, l.x_total);
    out.du = Matrix::Zero(rows, ucols);
  }
  int r = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& p = parts[k];
    const int nr = static_cast<int>(p.value.size());
    out.value.segment(r, nr) = p.value;
    if (jac) {
      out.dx.block(r, l.x_off[k], nr, l.nx[k]) = p.dx;
      if (!terminal) out.du.block(r, l.u_off[k], nr, l.nu[k]) = p.du;
    }
    r += nr;
  }
  for (std::size_t c = 0; c < cv.size(); ++c, ++r) {
    out.value(r) = cv[c];
    if (jac) out.dx.row(r) = crows[c].transpose();
  }
  return out;
}

Matrix stack_weights(const std::vector<Matrix>& blocks, int pairs, double coupling_weight) {
  int dim = pairs;
  for (const auto& w : blocks) dim += static_cast<int>(w.rows());
  Matrix W = Matrix::Zero(dim, dim);
  int r = 0;
  for (const auto& w : blocks) {
    W.block(r, r, w.rows(), w.cols()) = w;
    r += static_cast<int>(w.rows());
  }
  for (int c = 0; c < pairs; ++c, ++r) W(r, r) = coupling_weight;
  return W;
}

std::vector<ConstraintEval> lift_constraints(std::vector<ConstraintEval> cs, const Layout& l, int k, bool jac,
                                             bool terminal) {
  if (!jac) return cs;
  for (auto& c : cs) {
    Vector dx = Vector::Zero(l.x_total);
    dx.segment(l.x_off[k], l.nx[k]) = c.dx;
    c.dx = std::move(dx);
    Vector du = Vector::Zero(terminal ? 0 : l.u_total);
    if (!terminal && c.du.size() > 0) du.segment(l.u_off[k], l.nu[k]) = c.du;
    c.du = std::move(du);
  }
  return cs;
}

}  // namespace

double softplus(double z, double sharpness) {
  const double s = sharpness * z;
  // log(1 + e^s) = max(s, 0) + log1p(e^{-|s|})
  return (std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s)))) / sharpness;
}

Vector robot_block(const Vector& stacked, const std::vector<int>& sizes, int k) {
  int off = 0;
  for (int j = 0; j < k; ++j) off += sizes[j];
  return stacked.segment(off, sizes[k]);
}

OCPDef compose_multi_robot(const std::vector<OCPDef>& robots, const std::optional<Coupling>& coupling) {
  if (robots.empty()) throw std::invalid_argument("compose_multi_robot: no robots");
  const int N = robots.front().horizon;
  for (const auto& r : robots) {
    if (r.horizon != N) throw std::invalid_argument("compose_multi_robot: horizon mismatch");
    r.validate();
  }
  if (coupling) {
    if (!(coupling->sharpness > 0.0) || coupling->weight < 0.0 || coupling->pos_dim <= 0) {
      throw std::invalid_argument("compose_multi_robot: bad coupling parameters");
    }
    for (const auto& r : robots) {
      if (coupling->pos_index < 0 || coupling->pos_index + coupling->pos_dim > r.nx) {
        throw std::invalid_argument("compose_multi_robot: coupling position outside the state");
      }
    }
  }

  auto parts = std::make_shared<const std::vector<OCPDef>>(robots);
  auto layout = std::make_shared<const Layout>(make_layout(robots));
  const int k = static_cast<int>(robots.size());
  const int pairs = coupling ? k * (k - 1) / 2 : 0;

  OCPDef ocp;
  ocp.horizon = N;
  ocp.nx = layout->x_total;
  ocp.nu = layout->u_total;
  ocp.x0.resize(ocp.nx);
  for (int r = 0; r < k; ++r) ocp.x0.segment(layout->x_off[r], layout->nx[r]) = robots[r].x0;

  ocp.dynamics = [parts, layout](int i, const Vector& x, const Vector& u, bool jac) {
    const Layout& l = *layout;
    DynamicsEval out;
    out.next.resize(l.x_total);
    if (jac) {
      out.A = Matrix::Zero(l.x_total, l.x_total);
      out.B = Matrix::Zero(l.x_total, l.u_total);
    }
    for (std::size_t r = 0; r < parts->size(); ++r) {
      const DynamicsEval e = (*parts)[r].dynamics(i, x.segment(l.x_off[r], l.nx[r]), u.segment(l.u_off[r], l.nu[r]), jac);
      out.next.segment(l.x_off[r], l.nx[r]) = e.next;
      if (jac) {
        out.A.block(l.x_off[r], l.x_off[r], l.nx[r], l.nx[r]) = e.A;
        out.B.block(l.x_off[r], l.u_off[r], l.nx[r], l.nu[r]) = e.B;
      }
    }
    return out;
  };

  ocp.stage_residual = [parts, layout, coupling](int i, const Vector& x, const Vector& u, bool jac) {
    const Layout& l = *layout;
    std::vector<ResidualEval> rs;
    for (std::size_t r = 0; r < parts->size(); ++r) {
      rs.push_back((*parts)[r].stage_residual(i, x.segment(l.x_off[r], l.nx[r]), u.segment(l.u_off[r], l.nu[r]), jac));
    }
    return stack_residuals(rs, l, jac, false, coupling, x);
  };
  ocp.terminal_residual = [parts, layout, coupling](const Vector& x, bool jac) {
    const Layout& l = *layout;
    std::vector<ResidualEval> rs;
    for (std::size_t r = 0; r < parts->size(); ++r) {
      rs.push_back((*parts)[r].terminal_residual(x.segment(l.x_off[r], l.nx[r]), jac));
    }
    return stack_residuals(rs, l, jac, true, coupling, x);
  };

  const double cw = coupling ? coupling->weight : 0.0;
  ocp.stage_weight.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    std::vector<Matrix> blocks;
    for (const auto& r : robots) blocks.push_back(r.stage_weight[i]);
    ocp.stage_weight[i] = stack_weights(blocks, pairs, cw);
  }
  {
    std::vector<Matrix> blocks;
    for (const auto& r : robots) blocks.push_back(r.terminal_weight);
    ocp.terminal_weight = stack_weights(blocks, pairs, cw);
  }

  bool any_stage = false, any_terminal = false;
  for (const auto& r : robots) {
    any_stage = any_stage || static_cast<bool>(r.stage_constraints);
    any_terminal = any_terminal || static_cast<bool>(r.terminal_constraints);
  }
  if (any_stage) {
    ocp.stage_constraints = [parts, layout](int i, const Vector& x, const Vector& u, bool jac) {
      const Layout& l = *layout;
      std::vector<ConstraintEval> out;
      for (std::size_t r = 0; r < parts->size(); ++r) {
        const auto& p = (*parts)[r];
        if (!p.stage_constraints) continue;
        auto cs = lift_constraints(p.stage_constraints(i, x.segment(l.x_off[r], l.nx[r]), u.segment(l.u_off[r], l.nu[r]), jac),
                                   l, static_cast<int>(r), jac, false);
        out.insert(out.end(), std::make_move_iterator(cs.begin()), std::make_move_iterator(cs.end()));
      }
      return out;
    };
  }
  if (any_terminal) {
    ocp.terminal_constraints = [parts, layout](const Vector& x, bool jac) {
      const Layout& l = *layout;
      std::vector<ConstraintEval> out;
      for (std::size_t r = 0; r < parts->size(); ++r) {
        const auto& p = (*parts)[r];
        if (!p.terminal_constraints) continue;
        auto cs = lift_constraints(p.terminal_constraints(x.segment(l.x_off[r], l.nx[r]), jac), l, static_cast<int>(r),
                                   jac, true);
        out.insert(out.end(), std::make_move_iterator(cs.begin()), std::make_move_iterator(cs.end()));
      }
      return out;
    };
  }
  return ocp;
}

}  // namespace pdilqr::models
