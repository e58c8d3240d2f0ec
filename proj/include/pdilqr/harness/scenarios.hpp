#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pdilqr/harness/config.hpp"

namespace pdilqr::harness {

struct Problem {
  OCPDef ocp;
  Trajectory guess;
  std::vector<int> robot_nx;  // per-robot state sizes (one entry for single robots)
  std::vector<int> robot_nu;
};

/// OCP and cold-start guess of the configured model. `seed` perturbs the
/// initial state; the same seed always yields the same problem.
Problem build_problem(const RunConfig& config, std::uint64_t seed);

/// Single SRBD robot centred at `origin` walking with `velocity`, optionally
/// perturbed by `rng`. Guess: reference states and even force split.
Problem srbd_problem(const RunConfig& config, const Eigen::Vector2d& origin, const Eigen::Vector2d& velocity,
                     std::mt19937_64* rng);

/// Two SRBD robots whose straight references cross at the horizon's end.
Problem crossing_problem(const RunConfig& config, std::mt19937_64* rng);

/// k uncoupled robots spaced 1 m apart laterally.
Problem multi_problem(const RunConfig& config, int robots, std::mt19937_64* rng);

/// Splits a stacked trajectory into robot k's part.
Trajectory robot_trajectory(const Problem& problem, const Trajectory& stacked, int k);

}  // namespace pdilqr::harness
