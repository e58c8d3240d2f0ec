#pragma once

// Run configuration loaded from JSON. Every key is optional; unknown keys are
// rejected. See README.md for the schema.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdilqr/closed_loop.hpp"
#include "pdilqr/models/multi_robot.hpp"
#include "pdilqr/sqp.hpp"

namespace pdilqr::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { double_integrator, pendulum, srbd, srbd_multi, crossing };
const char* to_string(ModelKind kind);
const char* to_string(Backend backend);
const char* to_string(ScanMode mode);

struct BenchSettings {
  std::vector<std::string> sweeps{"horizon", "robots", "batch"};
  std::vector<int> horizons{10, 25, 50, 100, 200, 400};
  std::vector<int> robots{1, 2, 4, 8, 16};
  std::vector<int> batches{1, 8, 64, 512};
  int repeats = 20;
  int warmup = 3;
};

struct RunConfig {
  ModelKind model = ModelKind::double_integrator;
  std::optional<int> horizon;  // model default when unset
  std::optional<double> dt;
  Backend backend = Backend::sequential;
  ScanMode scan_mode = ScanMode::tree;
  int workers = 1;
  double tol = 1e-6;
  int max_iters = 50;
  bool rti = true;

  models::GaitSchedule gait;
  models::RobotParams robot;
  models::SrbdWeights weights;
  Eigen::Vector2d command = Eigen::Vector2d(0.3, 0.0);
  double height = 0.30;
  double duration = 4.0;
  Disturbance disturbance;

  int robots = 1;
  std::optional<models::Coupling> coupling;
  int batch = 1;
  bool batch_identical = false;  // every batch instance uses `seed`
  std::uint64_t seed = 1;
  bool corrupt_combine = false;
  BenchSettings bench;

  int resolved_horizon() const;
  double resolved_dt() const;
  SolverOptions solver_options() const;
  /// Throws ConfigError when counts or ranges are invalid.
  void validate() const;
};

/// Throws ConfigError naming the offending field.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

ModelKind parse_model(const std::string& name);
Backend parse_backend(const std::string& name);
ScanMode parse_scan_mode(const std::string& name);

}  // namespace pdilqr::harness
