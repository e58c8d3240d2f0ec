#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pdilqr/harness/commands.hpp"

using namespace pdilqr::harness;

int main(int argc, char** argv) {
  CLI::App app{"Parallel primal-dual iLQR solver: verification, solves, closed-loop simulation and benchmarks"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string backend;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
  std::string out;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--backend", backend, "sequential or scan")->check(CLI::IsMember({"sequential", "scan"}));
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed");
  app.add_option("--out", out, "CSV output path");

  auto* verify = app.add_subcommand("verify", "oracle-equivalence and property suites");
  auto* solve = app.add_subcommand("solve", "cold-start solve of the configured model");
  auto* simulate = app.add_subcommand("simulate", "closed-loop MPC of the quadruped model");
  auto* bench = app.add_subcommand("bench", "horizon, robot-count and batch sweeps");
  auto* batch = app.add_subcommand("batch", "independent solves mapped over workers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  RunConfig config;
  try {
    if (!config_path.empty()) config = load_config(config_path);
    if (!backend.empty()) config.backend = parse_backend(backend);
    if (workers) config.workers = *workers;
    if (seed) config.seed = *seed;
    config.validate();
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    if (verify->parsed()) return cmd_verify(config, out, std::cout);
    if (solve->parsed()) return cmd_solve(config, out, std::cout);
    if (simulate->parsed()) return cmd_simulate(config, out, std::cout);
    if (bench->parsed()) return cmd_bench(config, out, std::cout);
    if (batch->parsed()) return cmd_batch(config, out, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
