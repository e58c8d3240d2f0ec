#pragma once

// Subcommands of the command-line front end. Each returns the process exit
// code: 0 success, 1 failed check or solve. Config errors surface as
// ConfigError from the caller's parsing step (exit code 2).

#include <iosfwd>
#include <string>
#include <vector>

#include "pdilqr/harness/config.hpp"

namespace pdilqr::harness {

/// `out` may be empty to skip CSV output.
int cmd_verify(const RunConfig& config, const std::string& out, std::ostream& os);
int cmd_solve(const RunConfig& config, const std::string& out, std::ostream& os);
int cmd_simulate(const RunConfig& config, const std::string& out, std::ostream& os);
int cmd_bench(const RunConfig& config, const std::string& out, std::ostream& os);
int cmd_batch(const RunConfig& config, const std::string& out, std::ostream& os);

/// "<stem>_traj.csv" next to a stats CSV path.
std::string trajectory_path(const std::string& stats_path);

ClosedLoopConfig closed_loop_config(const RunConfig& config);

/// Published results that the benchmark lists but does not assert.
struct NotReproduced {
  std::string claim;
  std::string analog;
};
const std::vector<NotReproduced>& not_reproduced();

}  // namespace pdilqr::harness
