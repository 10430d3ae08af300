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

#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lpmppi/mpc.hpp"
#include "lpmppi/types.hpp"

namespace lpmppi::env {

// ---------------------------------------------------------------------------
// Pendulum. State (theta, theta_dot); theta = 0 hangs down, theta = pi is
// upright. Control is the joint torque.

struct PendulumParams {
  double mass = 1.0;
  double length = 1.0;
  double damping = 0.05;
  double gravity = 9.81;
  double torque_limit = 2.0;  // below m g l, so a single push cannot lift it
  double dt = 0.05;

  void validate() const;
};

struct PendulumCost {
  double angle = 1.0;      // weight on (1 + cos theta)^2
  double velocity = 0.1;   // weight on theta_dot^2
  double control = 0.01;   // weight on u^2
};

/// Semi-implicit Euler: velocity first, then angle with the new velocity.
void pendulum_step(const PendulumParams& p, std::span<const double> x,
                   std::span<const double> u, std::span<double> x_next);
std::array<double, 2> pendulum_step(const PendulumParams& p,
                                    std::array<double, 2> x, double u);

/// Zero upright at rest; 4 * angle weight hanging at rest.
double pendulum_cost(const PendulumCost& w, std::span<const double> x,
                     std::span<const double> u);

/// Mechanical energy with the potential zero at the pivot.
double pendulum_energy(const PendulumParams& p, std::span<const double> x);

mpc::OCPSpec make_pendulum_ocp(const PendulumParams& p, const PendulumCost& w,
                               int horizon);

// ---------------------------------------------------------------------------
// Cart-pole, point-mass pole on a frictionless cart. State
// (p, p_dot, theta, theta_dot) with the same angle convention as the pendulum.

struct CartpoleParams {
  double cart_mass = 1.0;
  double pole_mass = 0.1;
  double pole_length = 0.5;
  double gravity = 9.81;
  double force_limit = 10.0;
  double dt = 0.02;

  void validate() const;
};

struct CartpoleCost {
  double angle = 1.0;             // (1 + cos theta)^2
  double position = 0.1;          // p^2
  double velocity = 0.01;         // p_dot^2
  double angular_velocity = 0.01; // theta_dot^2
  double control = 0.001;         // u^2
};

/// Accelerations (p_ddot, theta_ddot) for state x under force u.
std::array<double, 2> cartpole_accelerations(const CartpoleParams& p,
                                             std::span<const double> x,
                                             double u);
void cartpole_step(const CartpoleParams& p, std::span<const double> x,
                   std::span<const double> u, std::span<double> x_next);
double cartpole_cost(const CartpoleCost& w, std::span<const double> x,
                     std::span<const double> u);
mpc::OCPSpec make_cartpole_ocp(const CartpoleParams& p, const CartpoleCost& w,
                               int horizon);

// ---------------------------------------------------------------------------
// Single-track car.

/// State vector layout used by the stepper and the OCP.
struct CarState {
  double x = 0.0, y = 0.0, yaw = 0.0;
  double vx = 0.0, vy = 0.0, yaw_rate = 0.0;

  std::array<double, 6> to_array() const { return {x, y, yaw, vx, vy, yaw_rate}; }
  static CarState from(std::span<const double> s);
};

/// Defaults approximate a 1:10 racing car. Tires are linear in slip angle.
struct SingleTrackParams {
  double mass = 3.47;
  double lf = 0.15875;
  double lr = 0.17145;
  double inertia = 0.04712;
  double front_stiffness = 87.6;  // N/rad
  double rear_stiffness = 93.7;   // N/rad
  double max_steer = 0.4;
  double min_accel = -3.0;
  double max_accel = 3.0;
  double max_speed = 5.0;
  double blend_low = 0.5;   // pure kinematic at or below (m/s)
  double blend_high = 1.0;  // pure dynamic at or above (m/s)
  double dt = 0.05;
  int substeps = 10;

  double wheelbase() const { return lf + lr; }
  void validate() const;
};

/// Controls u = (steering angle, longitudinal acceleration).
CarState single_track_step(const SingleTrackParams& p, const CarState& s,
                           double steer, double accel);
void single_track_step(const SingleTrackParams& p, std::span<const double> x,
                       std::span<const double> u, std::span<double> x_next);

/// Body slip angle atan2(vy, vx).
double slip_angle(const CarState& s);

// ---------------------------------------------------------------------------
// Track and Frenet frame.

class TrackSpec {
 public:
  /// `points` describe a closed loop; the closing point is appended if the
  /// last point differs from the first.
  TrackSpec(std::vector<std::array<double, 2>> points, double width);

  const std::vector<std::array<double, 2>>& points() const { return points_; }
  const std::vector<double>& arc_length() const { return cumulative_; }
  double length() const { return cumulative_.back(); }
  double width() const { return width_; }

  /// Segments that may contain the nearest centerline point to (x, y);
  /// empty outside the indexed region.
  std::span<const int> candidates(double x, double y) const;

 private:
  void build_index();

  std::vector<std::array<double, 2>> points_;
  std::vector<double> cumulative_;
  double width_;

  double grid_x0_ = 0.0, grid_y0_ = 0.0, cell_ = 0.1;
  int grid_nx_ = 0, grid_ny_ = 0;
  std::vector<int> cell_offsets_;
  std::vector<int> cell_segments_;
};

inline constexpr double kDefaultTrackLength = 14.2;
inline constexpr double kDefaultTrackWidth = 1.0;

/// Two straights joined by two semicircles of radius `radius`, scaled so the
/// polyline length is exactly `length`; counter-clockwise, starting mid-way
/// along the bottom straight heading +x.
std::shared_ptr<const TrackSpec> make_oval_track(
    double length = kDefaultTrackLength, double width = kDefaultTrackWidth,
    double radius = 1.5, double spacing = 0.02);

/// x,y per row (optional header / '#' comments); the loop is closed
/// implicitly.
std::shared_ptr<const TrackSpec> load_track_csv(const std::filesystem::path& path,
                                                double width);

struct FrenetPoint {
  double s = 0.0;        // arc length in [0, length)
  double n = 0.0;        // signed lateral offset, positive to the left
  double heading = 0.0;  // centerline heading
  double v_f = 0.0;      // velocity component along the centerline
};

inline constexpr double kMaxProjectionDistance = 5.0;

/// Nearest-segment projection. Throws std::out_of_range when the point is
/// more than kMaxProjectionDistance from the centerline.
FrenetPoint frenet_project(const TrackSpec& track, double x, double y,
                           double yaw, double vx = 0.0, double vy = 0.0);
std::optional<FrenetPoint> try_frenet_project(const TrackSpec& track, double x,
                                              double y, double yaw,
                                              double vx = 0.0, double vy = 0.0);

/// Racing step cost
///   -v_f + 100 softplus(-100 (T_w/2 - |n|)) + 100 max(|alpha| - 0.3, 0)
///   + 2 wrap(theta - T_theta)^2
double racing_cost(double v_f, double n, double alpha, double yaw,
                   double track_heading, double track_width);

struct RacingSetup {
  SingleTrackParams car;
  std::shared_ptr<const TrackSpec> track;
};

mpc::OCPSpec make_racing_ocp(const RacingSetup& setup, int horizon);

/// Car at rest on the centerline at s = 0, aligned with the track.
CarState racing_start_state(const TrackSpec& track);

}  // namespace lpmppi::env
