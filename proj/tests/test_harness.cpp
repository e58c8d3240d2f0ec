#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pdilqr/harness/commands.hpp"
#include "pdilqr/harness/config.hpp"
#include "pdilqr/harness/csv.hpp"
#include "pdilqr/harness/scenarios.hpp"
#include "pdilqr/harness/verify.hpp"

using namespace pdilqr;
using namespace pdilqr::harness;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "pdilqr_harness_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string after(const std::string& text, const std::string& key) {
  const auto pos = text.find(key);
  REQUIRE(pos != std::string::npos);
  const auto start = pos + key.size();
  return text.substr(start, text.find('\n', start) - start);
}

}  // namespace

TEST_CASE("config defaults and overrides") {
  const RunConfig d = parse_config("{}");
  CHECK(d.model == ModelKind::double_integrator);
  CHECK(d.resolved_horizon() == 50);
  CHECK(d.workers == 1);

  const RunConfig c = parse_config(R"({
    "model": "srbd", "horizon": 30, "backend": "scan", "scan_mode": "sequential", "seed": 9,
    "gait": {"kind": "stand"}, "robot": {"mass": 12.5}, "command": [0.1, 0.2],
    "disturbance": {"start": 1.0, "duration": 0.25, "force": [0, 50, 0]},
    "coupling": {"d_min": 0.7}
  })");
  CHECK(c.model == ModelKind::srbd);
  CHECK(c.resolved_horizon() == 30);
  CHECK(c.resolved_dt() == 0.02);
  CHECK(c.backend == Backend::scan);
  CHECK(c.scan_mode == ScanMode::sequential);
  CHECK(c.seed == 9);
  CHECK(c.gait.duty == 1.0);
  CHECK(c.robot.mass == 12.5);
  CHECK(c.command.y() == 0.2);
  CHECK(c.disturbance.force.y() == 50.0);
  REQUIRE(c.coupling);
  CHECK(c.coupling->d_min == 0.7);
}

TEST_CASE("config errors name the field") {
  auto message = [](const std::string& text) -> std::string {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message(R"({"model": "rocket"})").find("rocket") != std::string::npos);
  CHECK(message(R"({"horizn": 5})").find("horizn") != std::string::npos);
  CHECK(message(R"({"robot": {"mas": 5}})").find("robot.mas") != std::string::npos);
  CHECK(message(R"({"horizon": 0})").find("horizon") != std::string::npos);
  CHECK(message(R"({"workers": 0})").find("workers") != std::string::npos);
  CHECK(message(R"({"batch": "many"})").find("batch") != std::string::npos);
  CHECK(message("{\n  \"model\": \n}").find("line 3") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), ConfigError);
}

TEST_CASE("csv formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);

  const auto path = scratch("rows.csv");
  {
    CsvWriter w(path.string(), {"a", "b", "c"});
    CsvRow r;
    r << 1 << true << "x";
    w.write(r);
    CsvRow bad;
    bad << 1.0;
    CHECK_THROWS_AS(w.write(bad), std::invalid_argument);
  }
  CHECK(read_file(path) == "a,b,c\n1,1,x\n");
  CHECK(indexed_columns("u", 3) == std::vector<std::string>{"u0", "u1", "u2"});
}

TEST_CASE("trajectory digest is content sensitive") {
  RunConfig cfg;
  const Problem p = build_problem(cfg, 1);
  Trajectory t = p.guess;
  const std::string d = trajectory_digest(t);
  CHECK(d.size() == 16);
  CHECK(trajectory_digest(t) == d);
  t.u[3](0) = std::nextafter(t.u[3](0), 1.0);
  CHECK(trajectory_digest(t) != d);
}

TEST_CASE("seeded problems are reproducible") {
  RunConfig cfg;
  CHECK(trajectory_digest(build_problem(cfg, 5).guess) == trajectory_digest(build_problem(cfg, 5).guess));
  CHECK((build_problem(cfg, 5).ocp.x0 - build_problem(cfg, 6).ocp.x0).norm() > 0.0);
}

TEST_CASE("verify suites pass and the negative control fails") {
  const auto ok = run_verify_suites(1, {});
  for (const auto& s : ok) CHECK_MESSAGE(s.passed, s.name);
  ScanSettings bad;
  bad.corrupt_combine = true;
  bool named = false;
  for (const auto& s : run_verify_suites(1, bad))
    if (!s.passed && s.name == "scan_vs_riccati") named = true;
  CHECK(named);
}

TEST_CASE("batch of one equals solve") {
  for (ModelKind model : {ModelKind::double_integrator, ModelKind::pendulum}) {
    RunConfig cfg;
    cfg.model = model;
    cfg.seed = 3;
    std::ostringstream solve_out, batch_out;
    const auto stats = scratch("solve.csv");
    REQUIRE(cmd_solve(cfg, stats.string(), solve_out) == 0);
    const auto batch = scratch("batch.csv");
    REQUIRE(cmd_batch(cfg, batch.string(), batch_out) == 0);
    const std::string digest = after(solve_out.str(), "trajectory digest ");
    const std::string csv = read_file(batch);
    CHECK(csv.find("," + digest + "\n") != std::string::npos);
    CHECK(std::filesystem::exists(trajectory_path(stats.string())));
  }
}

TEST_CASE("batch instances match their own solves") {
  RunConfig cfg;
  cfg.model = ModelKind::pendulum;
  cfg.batch = 4;
  cfg.seed = 11;
  std::ostringstream sink;
  const auto batch = scratch("batch4.csv");
  REQUIRE(cmd_batch(cfg, batch.string(), sink) == 0);
  const std::string csv = read_file(batch);
  for (int b = 0; b < 4; ++b) {
    RunConfig one = cfg;
    one.batch = 1;
    one.seed = cfg.seed + b;
    std::ostringstream out;
    REQUIRE(cmd_solve(one, "", out) == 0);
    CHECK(csv.find("," + after(out.str(), "trajectory digest ") + "\n") != std::string::npos);
  }
}

TEST_CASE("identical batch gives identical outputs") {
  RunConfig cfg;
  cfg.model = ModelKind::pendulum;
  cfg.batch = 8;
  cfg.batch_identical = true;
  std::ostringstream sink;
  const auto batch = scratch("identical.csv");
  REQUIRE(cmd_batch(cfg, batch.string(), sink) == 0);
  std::ifstream in(batch);
  std::string line, tail;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    const std::string rest = line.substr(line.find(','));
    if (rows == 0) tail = rest;
    CHECK(rest == tail);
    ++rows;
  }
  CHECK(rows == 8);
}

TEST_CASE("simulate requires the srbd model") {
  RunConfig cfg;
  std::ostringstream out;
  CHECK(cmd_simulate(cfg, "", out) == 1);
}

TEST_CASE("solve backends agree on fixtures") {
  for (ModelKind model : {ModelKind::double_integrator, ModelKind::pendulum, ModelKind::srbd}) {
    RunConfig seq;
    seq.model = model;
    RunConfig scan = seq;
    scan.backend = Backend::scan;
    std::ostringstream a, b;
    REQUIRE(cmd_solve(seq, "", a) == 0);
    REQUIRE(cmd_solve(scan, "", b) == 0);
    CHECK(after(a.str(), "iterations ") == after(b.str(), "iterations "));
    const double ca = std::stod(after(a.str(), "final cost "));
    const double cb = std::stod(after(b.str(), "final cost "));
    CHECK(std::abs(ca - cb) <= 1e-8 * std::max(1.0, std::abs(ca)));
  }
}
