// Copyright 2026 The lpmppi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lpmppi/bench.hpp"

namespace lpmppi::bench {
namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument("config: " + where + ": " + what);
}

void check_keys(const YAML::Node& node, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!node.IsMap()) fail(where, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) fail(where, "unknown key '" + key + "'");
  }
}

template <typename T>
void read(const YAML::Node& node, const std::string& key, T& out,
          const std::string& where) {
  const YAML::Node v = node[key];
  if (!v) return;
  try {
    out = v.as<T>();
  } catch (const YAML::Exception& e) {
    fail(where + "." + key, "bad value (" + std::string(e.what()) + ")");
  }
}

std::string num(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  // Keep floats recognizable as floats.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

template <typename T>
std::string list(const std::vector<T>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      out += num(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out + "]";
}

void parse_environment(const YAML::Node& node, EnvironmentConfig& e) {
  check_keys(node, "environment",
             {"id", "pendulum", "pendulum_cost", "cartpole", "cartpole_cost",
              "car", "track", "initial_state"});
  read(node, "id", e.id, "environment");
  read(node, "initial_state", e.initial_state, "environment");
  if (const auto p = node["pendulum"]) {
    const std::string w = "environment.pendulum";
    check_keys(p, w, {"mass", "length", "damping", "gravity", "torque_limit", "dt"});
    read(p, "mass", e.pendulum.mass, w);
    read(p, "length", e.pendulum.length, w);
    read(p, "damping", e.pendulum.damping, w);
    read(p, "gravity", e.pendulum.gravity, w);
    read(p, "torque_limit", e.pendulum.torque_limit, w);
    read(p, "dt", e.pendulum.dt, w);
  }
  if (const auto p = node["pendulum_cost"]) {
    const std::string w = "environment.pendulum_cost";
    check_keys(p, w, {"angle", "velocity", "control"});
    read(p, "angle", e.pendulum_cost.angle, w);
    read(p, "velocity", e.pendulum_cost.velocity, w);
    read(p, "control", e.pendulum_cost.control, w);
  }
  if (const auto p = node["cartpole"]) {
    const std::string w = "environment.cartpole";
    check_keys(p, w, {"cart_mass", "pole_mass", "pole_length", "gravity",
                      "force_limit", "dt"});
    read(p, "cart_mass", e.cartpole.cart_mass, w);
    read(p, "pole_mass", e.cartpole.pole_mass, w);
    read(p, "pole_length", e.cartpole.pole_length, w);
    read(p, "gravity", e.cartpole.gravity, w);
    read(p, "force_limit", e.cartpole.force_limit, w);
    read(p, "dt", e.cartpole.dt, w);
  }
  if (const auto p = node["cartpole_cost"]) {
    const std::string w = "environment.cartpole_cost";
    check_keys(p, w, {"angle", "position", "velocity", "angular_velocity", "control"});
    read(p, "angle", e.cartpole_cost.angle, w);
    read(p, "position", e.cartpole_cost.position, w);
    read(p, "velocity", e.cartpole_cost.velocity, w);
    read(p, "angular_velocity", e.cartpole_cost.angular_velocity, w);
    read(p, "control", e.cartpole_cost.control, w);
  }
  if (const auto p = node["car"]) {
    const std::string w = "environment.car";
    check_keys(p, w, {"mass", "lf", "lr", "inertia", "front_stiffness",
                      "rear_stiffness", "max_steer", "min_accel", "max_accel",
                      "max_speed", "blend_low", "blend_high", "dt", "substeps"});
    auto& c = e.car;
    read(p, "mass", c.mass, w);
    read(p, "lf", c.lf, w);
    read(p, "lr", c.lr, w);
    read(p, "inertia", c.inertia, w);
    read(p, "front_stiffness", c.front_stiffness, w);
    read(p, "rear_stiffness", c.rear_stiffness, w);
    read(p, "max_steer", c.max_steer, w);
    read(p, "min_accel", c.min_accel, w);
    read(p, "max_accel", c.max_accel, w);
    read(p, "max_speed", c.max_speed, w);
    read(p, "blend_low", c.blend_low, w);
    read(p, "blend_high", c.blend_high, w);
    read(p, "dt", c.dt, w);
    read(p, "substeps", c.substeps, w);
  }
  if (const auto p = node["track"]) {
    const std::string w = "environment.track";
    check_keys(p, w, {"csv", "length", "width", "radius"});
    read(p, "csv", e.track_csv, w);
    read(p, "length", e.track_length, w);
    read(p, "width", e.track_width, w);
    read(p, "radius", e.track_radius, w);
  }
}

NamedController parse_controller(const YAML::Node& node, std::size_t index) {
  const std::string w = "controllers[" + std::to_string(index) + "]";
  check_keys(node, w, {"name", "variant", "lambda", "rollouts", "sigma",
                       "cutoff_hz", "order", "beta", "knots",
                       "smoothness_weight"});
  NamedController c;
  std::string variant = "mppi";
  read(node, "variant", variant, w);
  try {
    c.config.variant = mpc::parse_variant(variant);
  } catch (const std::invalid_argument& e) {
    fail(w + ".variant", e.what());
  }
  c.name = variant;
  read(node, "name", c.name, w);
  read(node, "lambda", c.config.lambda, w);
  read(node, "rollouts", c.config.rollouts, w);
  read(node, "sigma", c.config.sampler.sigma, w);
  read(node, "cutoff_hz", c.config.sampler.fc_hz, w);
  read(node, "order", c.config.sampler.order, w);
  read(node, "beta", c.config.sampler.beta, w);
  read(node, "knots", c.config.knots, w);
  read(node, "smoothness_weight", c.config.smoothness_weight, w);
  c.config.sampler.kind = mpc::noise_kind(c.config.variant);
  return c;
}

}  // namespace

double EnvironmentConfig::dt() const {
  if (id == "pendulum") return pendulum.dt;
  if (id == "cartpole") return cartpole.dt;
  if (id == "racing") return car.dt;
  throw std::invalid_argument("config: unknown environment id '" + id + "'");
}

void BenchConfig::validate() const {
  (void)environment.dt();
  if (controllers.empty()) fail("controllers", "at least one controller required");
  std::set<std::string> names;
  for (const auto& c : controllers) {
    if (!names.insert(c.name).second) fail("controllers", "duplicate name " + c.name);
  }
  if (horizon < 1) fail("horizon", "must be >= 1");
  if (steps < 0) fail("steps", "must be >= 0");
  if (seeds.empty()) fail("seeds", "seed list must be nonempty");
  if (workers < 1) fail("workers", "must be >= 1");
  if (sweep && (sweep->horizons.empty() || sweep->rollouts.empty())) {
    fail("sweep", "axes must be nonempty");
  }
}

const NamedController& BenchConfig::controller(const std::string& name) const {
  for (const auto& c : controllers) {
    if (c.name == name) return c;
  }
  throw std::invalid_argument("config: no controller named '" + name + "'");
}

BenchConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  BenchConfig cfg;
  if (!root || root.IsNull()) fail("<root>", "empty document");
  check_keys(root, "<root>",
             {"environment", "controllers", "horizon", "steps", "seeds", "sweep",
              "output_dir", "workers", "smoothness"});
  if (const auto e = root["environment"]) parse_environment(e, cfg.environment);
  if (const auto cs = root["controllers"]) {
    if (!cs.IsSequence()) fail("controllers", "expected a list");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      cfg.controllers.push_back(parse_controller(cs[i], i));
    }
  }
  read(root, "horizon", cfg.horizon, "<root>");
  read(root, "steps", cfg.steps, "<root>");
  read(root, "output_dir", cfg.output_dir, "<root>");
  read(root, "workers", cfg.workers, "<root>");
  if (const auto s = root["seeds"]) {
    if (s.IsSequence()) {
      read(root, "seeds", cfg.seeds, "<root>");
    } else {
      check_keys(s, "seeds", {"count", "start"});
      int count = 0;
      std::uint64_t start = 0;
      read(s, "count", count, "seeds");
      read(s, "start", start, "seeds");
      cfg.seeds.clear();
      for (int i = 0; i < count; ++i) cfg.seeds.push_back(start + i);
    }
  }
  if (const auto s = root["sweep"]) {
    check_keys(s, "sweep", {"horizons", "rollouts"});
    SweepAxes axes;
    read(s, "horizons", axes.horizons, "sweep");
    read(s, "rollouts", axes.rollouts, "sweep");
    cfg.sweep = axes;
  }
  if (const auto s = root["smoothness"]) {
    check_keys(s, "smoothness", {"window", "polyorder"});
    read(s, "window", cfg.smoothness.window, "smoothness");
    read(s, "polyorder", cfg.smoothness.polyorder, "smoothness");
  }
  cfg.validate();
  return cfg;
}

BenchConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const BenchConfig& cfg) {
  std::ostringstream os;
  const auto& e = cfg.environment;
  os << "environment:\n"
     << "  id: " << e.id << "\n"
     << "  pendulum:\n"
     << "    mass: " << num(e.pendulum.mass) << "\n"
     << "    length: " << num(e.pendulum.length) << "\n"
     << "    damping: " << num(e.pendulum.damping) << "\n"
     << "    gravity: " << num(e.pendulum.gravity) << "\n"
     << "    torque_limit: " << num(e.pendulum.torque_limit) << "\n"
     << "    dt: " << num(e.pendulum.dt) << "\n"
     << "  pendulum_cost:\n"
     << "    angle: " << num(e.pendulum_cost.angle) << "\n"
     << "    velocity: " << num(e.pendulum_cost.velocity) << "\n"
     << "    control: " << num(e.pendulum_cost.control) << "\n"
     << "  cartpole:\n"
     << "    cart_mass: " << num(e.cartpole.cart_mass) << "\n"
     << "    pole_mass: " << num(e.cartpole.pole_mass) << "\n"
     << "    pole_length: " << num(e.cartpole.pole_length) << "\n"
     << "    gravity: " << num(e.cartpole.gravity) << "\n"
     << "    force_limit: " << num(e.cartpole.force_limit) << "\n"
     << "    dt: " << num(e.cartpole.dt) << "\n"
     << "  cartpole_cost:\n"
     << "    angle: " << num(e.cartpole_cost.angle) << "\n"
     << "    position: " << num(e.cartpole_cost.position) << "\n"
     << "    velocity: " << num(e.cartpole_cost.velocity) << "\n"
     << "    angular_velocity: " << num(e.cartpole_cost.angular_velocity) << "\n"
     << "    control: " << num(e.cartpole_cost.control) << "\n"
     << "  car:\n"
     << "    mass: " << num(e.car.mass) << "\n"
     << "    lf: " << num(e.car.lf) << "\n"
     << "    lr: " << num(e.car.lr) << "\n"
     << "    inertia: " << num(e.car.inertia) << "\n"
     << "    front_stiffness: " << num(e.car.front_stiffness) << "\n"
     << "    rear_stiffness: " << num(e.car.rear_stiffness) << "\n"
     << "    max_steer: " << num(e.car.max_steer) << "\n"
     << "    min_accel: " << num(e.car.min_accel) << "\n"
     << "    max_accel: " << num(e.car.max_accel) << "\n"
     << "    max_speed: " << num(e.car.max_speed) << "\n"
     << "    blend_low: " << num(e.car.blend_low) << "\n"
     << "    blend_high: " << num(e.car.blend_high) << "\n"
     << "    dt: " << num(e.car.dt) << "\n"
     << "    substeps: " << e.car.substeps << "\n"
     << "  track:\n"
     << "    csv: \"" << e.track_csv << "\"\n"
     << "    length: " << num(e.track_length) << "\n"
     << "    width: " << num(e.track_width) << "\n"
     << "    radius: " << num(e.track_radius) << "\n"
     << "  initial_state: " << list(e.initial_state) << "\n";
  os << "controllers:\n";
  for (const auto& c : cfg.controllers) {
    const auto& k = c.config;
    os << "  - name: " << c.name << "\n"
       << "    variant: " << mpc::to_string(k.variant) << "\n"
       << "    lambda: " << num(k.lambda) << "\n"
       << "    rollouts: " << k.rollouts << "\n"
       << "    sigma: " << list(k.sampler.sigma) << "\n"
       << "    cutoff_hz: " << num(k.sampler.fc_hz) << "\n"
       << "    order: " << k.sampler.order << "\n"
       << "    beta: " << num(k.sampler.beta) << "\n"
       << "    knots: " << k.knots << "\n"
       << "    smoothness_weight: " << num(k.smoothness_weight) << "\n";
  }
  os << "horizon: " << cfg.horizon << "\n"
     << "steps: " << cfg.steps << "\n"
     << "seeds: " << list(cfg.seeds) << "\n";
  if (cfg.sweep) {
    os << "sweep:\n"
       << "  horizons: " << list(cfg.sweep->horizons) << "\n"
       << "  rollouts: " << list(cfg.sweep->rollouts) << "\n";
  }
  os << "output_dir: \"" << cfg.output_dir << "\"\n"
     << "workers: " << cfg.workers << "\n"
     << "smoothness:\n"
     << "  window: " << cfg.smoothness.window << "\n"
     << "  polyorder: " << cfg.smoothness.polyorder << "\n";
  return os.str();
}

std::string fingerprint(const BenchConfig& config) {
  std::uint64_t h = 0;
  for (unsigned char c : dump_config(config)) h = mix64(h ^ c);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace lpmppi::bench
