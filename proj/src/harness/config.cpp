#include "pdilqr/harness/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pdilqr::harness {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ConfigError("config: field '" + field + "': " + msg);
}

// Reads keys of one JSON object and remembers which were consumed.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    auto it = obj_.find(key);
    if (it == obj_.end()) return nullptr;
    used_.insert(key);
    return &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(field(key), "expected a number");
      out = v->get<double>();
    }
  }
  void number(const std::string& key, std::optional<double>& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(field(key), "expected a number");
      out = v->get<double>();
    }
  }
  void integer(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(field(key), "expected an integer");
      out = v->get<int>();
    }
  }
  void integer(const std::string& key, std::optional<int>& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(field(key), "expected an integer");
      out = v->get<int>();
    }
  }
  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(field(key), "expected true or false");
      out = v->get<bool>();
    }
  }
  std::optional<std::string> string(const std::string& key) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(field(key), "expected a string");
      return v->get<std::string>();
    }
    return std::nullopt;
  }
  template <int Size>
  void vector(const std::string& key, Eigen::Matrix<double, Size, 1>& out) {
    if (const json* v = find(key)) out = to_vector<Size>(*v, field(key));
  }
  void int_list(const std::string& key, std::vector<int>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array() || v->empty()) fail(field(key), "expected a non-empty array of integers");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number_integer()) fail(field(key), "expected a non-empty array of integers");
        out.push_back(e.get<int>());
      }
    }
  }

  template <int Size>
  static Eigen::Matrix<double, Size, 1> to_vector(const json& v, const std::string& name) {
    if (!v.is_array() || v.size() != static_cast<std::size_t>(Size)) {
      fail(name, "expected an array of " + std::to_string(Size) + " numbers");
    }
    Eigen::Matrix<double, Size, 1> out;
    for (int i = 0; i < Size; ++i) {
      if (!v[i].is_number()) fail(name, "expected an array of " + std::to_string(Size) + " numbers");
      out(i) = v[i].get<double>();
    }
    return out;
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!used_.count(it.key())) {
        throw ConfigError("config: unknown key '" + field(it.key()) + "'");
      }
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> used_;
};

void read_gait(const json& j, models::GaitSchedule& gait) {
  ObjectReader r(j, "gait");
  if (auto kind = r.string("kind")) {
    if (*kind == "trot") gait = models::GaitSchedule::trot(gait.period);
    else if (*kind == "stand") gait = models::GaitSchedule::stand();
    else fail("gait.kind", "expected 'trot' or 'stand', got '" + *kind + "'");
  }
  r.number("period", gait.period);
  r.number("duty", gait.duty);
  if (const json* v = r.find("phase_offsets")) {
    const Eigen::Vector4d off = ObjectReader::to_vector<4>(*v, "gait.phase_offsets");
    for (int i = 0; i < 4; ++i) gait.phase_offsets[i] = off(i);
  }
  r.finish();
}

void read_robot(const json& j, models::RobotParams& robot) {
  ObjectReader r(j, "robot");
  r.number("mass", robot.mass);
  if (const json* v = r.find("inertia")) {
    if (v->is_array() && v->size() == 3) {
      robot.inertia = ObjectReader::to_vector<3>(*v, "robot.inertia").asDiagonal();
    } else {
      const Eigen::Matrix<double, 9, 1> flat = ObjectReader::to_vector<9>(*v, "robot.inertia");
      robot.inertia = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(flat.data());
    }
  }
  if (const json* v = r.find("stance_offsets")) {
    if (!v->is_array() || v->size() != 4) fail("robot.stance_offsets", "expected 4 arrays of 3 numbers");
    for (int i = 0; i < 4; ++i) {
      robot.stance_offsets[i] = ObjectReader::to_vector<3>((*v)[i], "robot.stance_offsets");
    }
  }
  r.number("friction", robot.friction);
  r.number("fz_min", robot.fz_min);
  r.number("fz_max", robot.fz_max);
  r.number("gravity", robot.gravity);
  r.finish();
  try {
    robot.validate();
  } catch (const std::invalid_argument& e) {
    fail("robot", e.what());
  }
}

void read_weights(const json& j, models::SrbdWeights& w) {
  ObjectReader r(j, "weights");
  r.number("position_xy", w.position_xy);
  r.number("height", w.height);
  r.vector<3>("orientation", w.orientation);
  r.vector<3>("velocity", w.velocity);
  r.vector<3>("angular_rate", w.angular_rate);
  r.number("force", w.force);
  r.number("swing_force", w.swing_force);
  r.number("terminal_scale", w.terminal_scale);
  r.number("barrier_mu", w.barrier_mu);
  r.number("barrier_delta", w.barrier_delta);
  r.finish();
}

void read_disturbance(const json& j, Disturbance& d) {
  ObjectReader r(j, "disturbance");
  r.number("start", d.start);
  r.number("duration", d.duration);
  r.vector<3>("force", d.force);
  r.finish();
}

void read_coupling(const json& j, std::optional<models::Coupling>& c) {
  if (j.is_null()) {
    c.reset();
    return;
  }
  models::Coupling out;
  ObjectReader r(j, "coupling");
  r.number("d_min", out.d_min);
  r.number("weight", out.weight);
  r.number("sharpness", out.sharpness);
  r.integer("pos_index", out.pos_index);
  r.integer("pos_dim", out.pos_dim);
  r.finish();
  c = out;
}

void read_bench(const json& j, BenchSettings& b) {
  ObjectReader r(j, "bench");
  if (const json* v = r.find("sweeps")) {
    if (!v->is_array()) fail("bench.sweeps", "expected an array of sweep names");
    b.sweeps.clear();
    for (const auto& e : *v) {
      if (!e.is_string()) fail("bench.sweeps", "expected an array of sweep names");
      const auto s = e.get<std::string>();
      if (s != "horizon" && s != "robots" && s != "batch") {
        fail("bench.sweeps", "unknown sweep '" + s + "' (horizon, robots, batch)");
      }
      b.sweeps.push_back(s);
    }
  }
  r.int_list("horizons", b.horizons);
  r.int_list("robots", b.robots);
  r.int_list("batches", b.batches);
  r.integer("repeats", b.repeats);
  r.integer("warmup", b.warmup);
  r.finish();
}

}  // namespace

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::double_integrator: return "double_integrator";
    case ModelKind::pendulum: return "pendulum";
    case ModelKind::srbd: return "srbd";
    case ModelKind::srbd_multi: return "srbd_multi";
    case ModelKind::crossing: return "crossing";
  }
  return "?";
}

const char* to_string(Backend backend) { return backend == Backend::sequential ? "sequential" : "scan"; }
const char* to_string(ScanMode mode) { return mode == ScanMode::sequential ? "sequential" : "tree"; }

ModelKind parse_model(const std::string& name) {
  for (ModelKind k : {ModelKind::double_integrator, ModelKind::pendulum, ModelKind::srbd, ModelKind::srbd_multi,
                      ModelKind::crossing}) {
    if (name == to_string(k)) return k;
  }
  fail("model", "unknown model '" + name + "' (double_integrator, pendulum, srbd, srbd_multi, crossing)");
}

Backend parse_backend(const std::string& name) {
  if (name == "sequential") return Backend::sequential;
  if (name == "scan") return Backend::scan;
  fail("backend", "expected 'sequential' or 'scan', got '" + name + "'");
}

ScanMode parse_scan_mode(const std::string& name) {
  if (name == "sequential") return ScanMode::sequential;
  if (name == "tree") return ScanMode::tree;
  fail("scan_mode", "expected 'sequential' or 'tree', got '" + name + "'");
}

int RunConfig::resolved_horizon() const {
  if (horizon) return *horizon;
  switch (model) {
    case ModelKind::double_integrator: return 50;
    case ModelKind::pendulum: return 80;
    case ModelKind::crossing: return 100;
    default: return 50;
  }
}

double RunConfig::resolved_dt() const {
  if (dt) return *dt;
  switch (model) {
    case ModelKind::double_integrator: return 0.1;
    case ModelKind::pendulum: return 0.05;
    default: return 0.02;
  }
}

SolverOptions RunConfig::solver_options() const {
  SolverOptions o;
  o.backend = backend;
  o.workers = workers;
  o.scan.mode = scan_mode;
  o.scan.workers = workers;
  o.scan.corrupt_combine = corrupt_combine;
  return o;
}

void RunConfig::validate() const {
  if (resolved_horizon() < 1) fail("horizon", "must be >= 1");
  if (!(resolved_dt() > 0.0)) fail("dt", "must be positive");
  if (workers < 1) fail("workers", "must be >= 1");
  if (max_iters < 1) fail("max_iters", "must be >= 1");
  if (!(tol > 0.0)) fail("tol", "must be positive");
  if (robots < 1) fail("robots", "must be >= 1");
  if (batch < 1) fail("batch", "must be >= 1");
  if (!(duration > 0.0)) fail("duration", "must be positive");
  if (disturbance.duration < 0.0) fail("disturbance.duration", "must be >= 0");
  if (bench.repeats < 1) fail("bench.repeats", "must be >= 1");
  if (bench.warmup < 0) fail("bench.warmup", "must be >= 0");
  for (int v : bench.horizons)
    if (v < 1) fail("bench.horizons", "entries must be >= 1");
  for (int v : bench.robots)
    if (v < 1) fail("bench.robots", "entries must be >= 1");
  for (int v : bench.batches)
    if (v < 1) fail("bench.batches", "entries must be >= 1");
  try {
    gait.validate();
  } catch (const std::invalid_argument& e) {
    fail("gait", e.what());
  }
  if (coupling && !(coupling->sharpness > 0.0)) fail("coupling.sharpness", "must be positive");
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  RunConfig cfg;
  ObjectReader r(root, "");
  if (auto s = r.string("model")) cfg.model = parse_model(*s);
  r.integer("horizon", cfg.horizon);
  r.number("dt", cfg.dt);
  if (auto s = r.string("backend")) cfg.backend = parse_backend(*s);
  if (auto s = r.string("scan_mode")) cfg.scan_mode = parse_scan_mode(*s);
  r.integer("workers", cfg.workers);
  r.number("tol", cfg.tol);
  r.integer("max_iters", cfg.max_iters);
  r.boolean("rti", cfg.rti);
  if (const json* v = r.find("gait")) read_gait(*v, cfg.gait);
  if (const json* v = r.find("robot")) read_robot(*v, cfg.robot);
  if (const json* v = r.find("weights")) read_weights(*v, cfg.weights);
  r.vector<2>("command", cfg.command);
  r.number("height", cfg.height);
  r.number("duration", cfg.duration);
  if (const json* v = r.find("disturbance")) read_disturbance(*v, cfg.disturbance);
  r.integer("robots", cfg.robots);
  if (const json* v = r.find("coupling")) read_coupling(*v, cfg.coupling);
  r.integer("batch", cfg.batch);
  r.boolean("batch_identical", cfg.batch_identical);
  if (const json* v = r.find("seed")) {
    if (!v->is_number_unsigned()) fail("seed", "expected a non-negative integer");
    cfg.seed = v->get<std::uint64_t>();
  }
  r.boolean("corrupt_combine", cfg.corrupt_combine);
  if (const json* v = r.find("bench")) read_bench(*v, cfg.bench);
  r.finish();
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace pdilqr::harness
