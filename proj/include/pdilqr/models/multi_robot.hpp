#pragma once

#include <optional>
#include <vector>

#include "pdilqr/ocp.hpp"

namespace pdilqr::models {

/// Pairwise collision penalty on robot positions x[pos_index .. pos_index + pos_dim).
/// Residual per pair and node: softplus(d_min - |p_a - p_b|) with the given sharpness.
struct Coupling {
  double d_min = 0.5;
  double weight = 1e5;
  double sharpness = 50.0;
  int pos_index = 0;
  int pos_dim = 2;
};

/// softplus_s(z) = log(1 + exp(s z)) / s, evaluated without overflow.
double softplus(double z, double sharpness);

/// Stacks robots into one OCP with block-diagonal dynamics, costs and
/// constraints. Throws std::invalid_argument on an empty list or mismatched
/// horizons.
OCPDef compose_multi_robot(const std::vector<OCPDef>& robots, const std::optional<Coupling>& coupling = std::nullopt);

/// Slice of robot k's state / input out of a stacked vector.
Vector robot_block(const Vector& stacked, const std::vector<int>& sizes, int k);

}  // namespace pdilqr::models
