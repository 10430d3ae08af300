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
#include <stdexcept>

#include "lpmppi/environments.hpp"

namespace lpmppi::env {

void PendulumParams::validate() const {
  if (!(mass > 0 && length > 0 && damping >= 0 && gravity > 0 &&
        torque_limit > 0 && dt > 0)) {
    throw std::invalid_argument("pendulum: parameters must be positive");
  }
  if (!(torque_limit < mass * gravity * length)) {
    throw std::invalid_argument("pendulum: torque limit must be below m*g*l");
  }
}

void pendulum_step(const PendulumParams& p, std::span<const double> x,
                   std::span<const double> u, std::span<double> x_next) {
  const double accel =
      (u[0] - p.damping * x[1] - p.mass * p.gravity * p.length * std::sin(x[0])) /
      (p.mass * p.length * p.length);
  const double omega = x[1] + p.dt * accel;
  x_next[0] = x[0] + p.dt * omega;
  x_next[1] = omega;
}

std::array<double, 2> pendulum_step(const PendulumParams& p,
                                    std::array<double, 2> x, double u) {
  std::array<double, 2> out{};
  pendulum_step(p, x, std::span<const double>(&u, 1), out);
  return out;
}

double pendulum_cost(const PendulumCost& w, std::span<const double> x,
                     std::span<const double> u) {
  const double up = 1.0 + std::cos(x[0]);
  return w.angle * up * up + w.velocity * x[1] * x[1] + w.control * u[0] * u[0];
}

double pendulum_energy(const PendulumParams& p, std::span<const double> x) {
  const double inertia = p.mass * p.length * p.length;
  return 0.5 * inertia * x[1] * x[1] -
         p.mass * p.gravity * p.length * std::cos(x[0]);
}

mpc::OCPSpec make_pendulum_ocp(const PendulumParams& p, const PendulumCost& w,
                               int horizon) {
  p.validate();
  mpc::OCPSpec ocp;
  ocp.state_dim = 2;
  ocp.control_dim = 1;
  ocp.dt = p.dt;
  ocp.horizon = horizon;
  ocp.dynamics = [p](std::span<const double> x, std::span<const double> u,
                     std::span<double> next) { pendulum_step(p, x, u, next); };
  ocp.step_cost = [w](std::span<const double> x, std::span<const double> u) {
    return pendulum_cost(w, x, u);
  };
  ocp.terminal_cost = [](std::span<const double>) { return 0.0; };
  ocp.lower = Vector::Constant(1, -p.torque_limit);
  ocp.upper = Vector::Constant(1, p.torque_limit);
  return ocp;
}

void CartpoleParams::validate() const {
  if (!(cart_mass > 0 && pole_mass > 0 && pole_length > 0 && gravity > 0 &&
        force_limit > 0 && dt > 0)) {
    throw std::invalid_argument("cartpole: parameters must be positive");
  }
}

std::array<double, 2> cartpole_accelerations(const CartpoleParams& p,
                                             std::span<const double> x,
                                             double u) {
  const double s = std::sin(x[2]);
  const double c = std::cos(x[2]);
  const double w = x[3];
  const double denom = p.cart_mass + p.pole_mass * s * s;
  const double p_acc =
      (u + p.pole_mass * s * (p.pole_length * w * w + p.gravity * c)) / denom;
  const double th_acc =
      (-u * c - p.pole_mass * p.pole_length * w * w * c * s -
       (p.cart_mass + p.pole_mass) * p.gravity * s) /
      (p.pole_length * denom);
  return {p_acc, th_acc};
}

void cartpole_step(const CartpoleParams& p, std::span<const double> x,
                   std::span<const double> u, std::span<double> x_next) {
  const auto [p_acc, th_acc] = cartpole_accelerations(p, x, u[0]);
  const double v = x[1] + p.dt * p_acc;
  const double w = x[3] + p.dt * th_acc;
  x_next[0] = x[0] + p.dt * v;
  x_next[1] = v;
  x_next[2] = x[2] + p.dt * w;
  x_next[3] = w;
}

double cartpole_cost(const CartpoleCost& w, std::span<const double> x,
                     std::span<const double> u) {
  const double up = 1.0 + std::cos(x[2]);
  return w.angle * up * up + w.position * x[0] * x[0] +
         w.velocity * x[1] * x[1] + w.angular_velocity * x[3] * x[3] +
         w.control * u[0] * u[0];
}

mpc::OCPSpec make_cartpole_ocp(const CartpoleParams& p, const CartpoleCost& w,
                               int horizon) {
  p.validate();
  mpc::OCPSpec ocp;
  ocp.state_dim = 4;
  ocp.control_dim = 1;
  ocp.dt = p.dt;
  ocp.horizon = horizon;
  ocp.dynamics = [p](std::span<const double> x, std::span<const double> u,
                     std::span<double> next) { cartpole_step(p, x, u, next); };
  ocp.step_cost = [w](std::span<const double> x, std::span<const double> u) {
    return cartpole_cost(w, x, u);
  };
  ocp.terminal_cost = [](std::span<const double>) { return 0.0; };
  ocp.lower = Vector::Constant(1, -p.force_limit);
  ocp.upper = Vector::Constant(1, p.force_limit);
  return ocp;
}

}  // namespace lpmppi::env
