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

#include <cmath>
#include <span>
#include <stdexcept>

#include "lpmppi/bench.hpp"

namespace lpmppi::bench {

Environment make_environment(const EnvironmentConfig& config, int horizon) {
  Environment env;
  env.id = config.id;
  if (config.id == "pendulum") {
    config.pendulum.validate();
    env.ocp = env::make_pendulum_ocp(config.pendulum, config.pendulum_cost, horizon);
    env.initial_state = Vector::Zero(2);
  } else if (config.id == "cartpole") {
    config.cartpole.validate();
    env.ocp = env::make_cartpole_ocp(config.cartpole, config.cartpole_cost, horizon);
    env.initial_state = Vector::Zero(4);
  } else if (config.id == "racing") {
    config.car.validate();
    env.track = config.track_csv.empty()
                    ? env::make_oval_track(config.track_length, config.track_width,
                                           config.track_radius)
                    : env::load_track_csv(config.track_csv, config.track_width);
    env.ocp = env::make_racing_ocp({config.car, env.track}, horizon);
    const auto s = env::racing_start_state(*env.track).to_array();
    env.initial_state = Eigen::Map<const Vector>(s.data(), 6);
  } else {
    throw std::invalid_argument("unknown environment id '" + config.id + "'");
  }
  if (!config.initial_state.empty()) {
    if (static_cast<int>(config.initial_state.size()) != env.ocp.state_dim) {
      throw std::invalid_argument("initial_state has the wrong dimension");
    }
    env.initial_state = Eigen::Map<const Vector>(config.initial_state.data(),
                                                 env.ocp.state_dim);
  }
  return env;
}

metrics::EpisodeResult run_episode(const BenchConfig& config, std::uint64_t seed,
                                   std::size_t controller_index) {
  if (controller_index >= config.controllers.size()) {
    throw std::out_of_range("controller index out of range");
  }
  const Environment env = make_environment(config.environment, config.horizon);
  const auto& ocp = env.ocp;
  auto ctrl = mpc::make_controller(config.controllers[controller_index].config, ocp);
  Rng rng(derive_seed(seed, {kControllerStream}));

  metrics::EpisodeResult out;
  out.seed = seed;
  out.config_fingerprint = fingerprint(config);
  const int T = config.steps;
  const auto n = static_cast<std::size_t>(ocp.state_dim);
  const auto m = static_cast<std::size_t>(ocp.control_dim);
  out.states.resize(T + 1, ocp.state_dim);
  out.applied_controls.resize(T, ocp.control_dim);
  out.states.row(0) = env.initial_state.transpose();

  Vector x = env.initial_state;
  Vector x_next(ocp.state_dim);
  int t = 0;
  for (; t < T; ++t) {
    auto step = mpc::mppi_step(ctrl, ocp, x, rng);
    if (!step.diagnostics.error.empty()) ++out.controller_errors;
    out.compute_seconds.push_back(step.diagnostics.compute_seconds);
    const std::span<const double> xs(x.data(), n);
    const std::span<const double> us(step.control.data(), m);
    out.step_costs.push_back(ocp.step_cost(xs, us));
    ocp.dynamics(xs, us, std::span<double>(x_next.data(), n));
    out.applied_controls.row(t) = step.control.transpose();
    if (!x_next.allFinite()) {
      out.terminated_early = true;
      out.termination_reason = "nonfinite state at step " + std::to_string(t + 1);
      ++t;
      break;
    }
    x = x_next;
    out.states.row(t + 1) = x.transpose();
  }
  out.applied_controls.conservativeResize(t, Eigen::NoChange);
  out.states.conservativeResize(out.terminated_early ? t : t + 1, Eigen::NoChange);
  return out;
}

}  // namespace lpmppi::bench
