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

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lpmppi/environments.hpp"

namespace lpmppi::env {

CarState CarState::from(std::span<const double> s) {
  return {s[0], s[1], s[2], s[3], s[4], s[5]};
}

void SingleTrackParams::validate() const {
  if (!(mass > 0 && lf > 0 && lr > 0 && inertia > 0 && front_stiffness > 0 &&
        rear_stiffness > 0 && max_steer > 0 && min_accel < max_accel &&
        max_speed > 0 && dt > 0 && substeps >= 1)) {
    throw std::invalid_argument("single track: invalid parameters");
  }
  if (!(0.0 <= blend_low && blend_low < blend_high)) {
    throw std::invalid_argument("single track: need 0 <= blend_low < blend_high");
  }
}

double slip_angle(const CarState& s) { return std::atan2(s.vy, s.vx); }

namespace {

// Velocities after one substep of length h.
struct Velocities {
  double vx, vy, r;
};

Velocities kinematic_velocities(const SingleTrackParams& p, const CarState& s,
                                double steer, double accel, double h) {
  const double vx = s.vx + h * accel;
  const double r = vx * std::tan(steer) / p.wheelbase();
  return {vx, r * p.lr, r};
}

Velocities dynamic_velocities(const SingleTrackParams& p, const CarState& s,
                              double steer, double accel, double h) {
  const double alpha_f = std::atan2(s.vy + p.lf * s.yaw_rate, s.vx) - steer;
  const double alpha_r = std::atan2(s.vy - p.lr * s.yaw_rate, s.vx);
  const double fyf = -p.front_stiffness * alpha_f;
  const double fyr = -p.rear_stiffness * alpha_r;
  const double cs = std::cos(steer);
  const double ax = accel - fyf * std::sin(steer) / p.mass + s.yaw_rate * s.vy;
  const double ay = (fyf * cs + fyr) / p.mass - s.yaw_rate * s.vx;
  const double yaw_acc = (p.lf * fyf * cs - p.lr * fyr) / p.inertia;
  return {s.vx + h * ax, s.vy + h * ay, s.yaw_rate + h * yaw_acc};
}

}  // namespace

CarState single_track_step(const SingleTrackParams& p, const CarState& s0,
                           double steer, double accel) {
  steer = std::clamp(steer, -p.max_steer, p.max_steer);
  accel = std::clamp(accel, p.min_accel, p.max_accel);
  const double h = p.dt / p.substeps;
  CarState s = s0;
  for (int k = 0; k < p.substeps; ++k) {
    const double w = std::clamp((s.vx - p.blend_low) / (p.blend_high - p.blend_low),
                                0.0, 1.0);
    Velocities v = kinematic_velocities(p, s, steer, accel, h);
    if (w > 0.0) {
      const Velocities d = dynamic_velocities(p, s, steer, accel, h);
      v = {w * d.vx + (1 - w) * v.vx, w * d.vy + (1 - w) * v.vy,
           w * d.r + (1 - w) * v.r};
    }
    v.vx = std::clamp(v.vx, 0.0, p.max_speed);
    // Semi-implicit: pose advances with the updated velocities.
    const double c = std::cos(s.yaw), sn = std::sin(s.yaw);
    s.x += h * (v.vx * c - v.vy * sn);
    s.y += h * (v.vx * sn + v.vy * c);
    s.yaw += h * v.r;
    s.vx = v.vx;
    s.vy = v.vy;
    s.yaw_rate = v.r;
  }
  return s;
}

void single_track_step(const SingleTrackParams& p, std::span<const double> x,
                       std::span<const double> u, std::span<double> x_next) {
  const CarState next = single_track_step(p, CarState::from(x), u[0], u[1]);
  const auto arr = next.to_array();
  std::copy(arr.begin(), arr.end(), x_next.begin());
}

}  // namespace lpmppi::env
