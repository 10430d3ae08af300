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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "lpmppi/environments.hpp"

namespace lpmppi::env {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Pendulum, OneStepFromHorizontal) {
  // theta_ddot = -g/l sin(pi/2) = -9.81; omega' = -0.4905; theta' uses omega'.
  const auto x = pendulum_step(PendulumParams{}, {kPi / 2, 0.0}, 0.0);
  EXPECT_NEAR(x[1], -0.4905, 1e-14);
  EXPECT_NEAR(x[0], kPi / 2 - 0.024525, 1e-14);

  // Torque and damping enter through the same acceleration.
  const auto y = pendulum_step(PendulumParams{}, {0.0, 1.0}, 1.5);
  EXPECT_NEAR(y[1], 1.0 + 0.05 * (1.5 - 0.05), 1e-14);
}

TEST(Pendulum, UnitParametersOneStep) {
  PendulumParams p;
  p.mass = p.length = p.gravity = 1.0;
  p.damping = 0.0;
  p.torque_limit = 0.5;
  p.dt = 0.01;
  const auto x = pendulum_step(p, {kPi / 2, 0.0}, 0.0);
  EXPECT_NEAR(x[1], -0.01, 1e-15);
  EXPECT_NEAR(x[0], kPi / 2 - 0.0001, 1e-15);
}

TEST(Pendulum, EquilibriaStayPut) {
  const auto down = pendulum_step(PendulumParams{}, {0.0, 0.0}, 0.0);
  EXPECT_EQ(down[0], 0.0);
  EXPECT_EQ(down[1], 0.0);
  auto up = std::array<double, 2>{kPi, 0.0};
  for (int k = 0; k < 10; ++k) up = pendulum_step(PendulumParams{}, up, 0.0);
  EXPECT_NEAR(up[0], kPi, 1e-12);
  EXPECT_NEAR(up[1], 0.0, 1e-12);
}

TEST(Pendulum, CostConvention) {
  const PendulumCost w{2.0, 0.1, 0.01};
  const double hang[] = {0.0, 0.0}, up[] = {kPi, 0.0}, moving[] = {kPi, 3.0};
  const double u0[] = {0.0}, u1[] = {2.0};
  EXPECT_NEAR(pendulum_cost(w, hang, u0), 8.0, 1e-15);
  EXPECT_NEAR(pendulum_cost(w, up, u0), 0.0, 1e-15);
  EXPECT_NEAR(pendulum_cost(w, moving, u1), 0.9 + 0.04, 1e-14);
}

TEST(Pendulum, UndampedEnergyIsNearlyConserved) {
  PendulumParams p;
  p.damping = 0.0;
  p.dt = 0.01;
  std::array<double, 2> x{1.0, 0.0};
  const double e0 = pendulum_energy(p, x);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    x = pendulum_step(p, x, 0.0);
    worst = std::max(worst, std::abs(pendulum_energy(p, x) - e0) / std::abs(e0));
  }
  EXPECT_LE(worst, 0.02);
}

TEST(Pendulum, TorqueLimitMustBeBelowGravityTorque) {
  PendulumParams p;
  p.torque_limit = 9.81;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  const auto ocp = make_pendulum_ocp({}, {}, 10);
  EXPECT_EQ(ocp.upper[0], 2.0);
  EXPECT_EQ(ocp.lower[0], -2.0);
}

TEST(Cartpole, HangingAtRestAcceleratesWithTheForce) {
  const CartpoleParams p;
  const double x[] = {0.0, 0.0, 0.0, 0.0};
  const auto [p_acc, th_acc] = cartpole_accelerations(p, x, 2.0);
  EXPECT_NEAR(p_acc, 2.0 / p.cart_mass, 1e-15);
  EXPECT_NEAR(th_acc, -2.0 / (p.pole_length * p.cart_mass), 1e-15);

  const double up[] = {0.0, 0.0, kPi, 0.0};
  const auto [pu, thu] = cartpole_accelerations(p, up, 0.0);
  EXPECT_NEAR(pu, 0.0, 1e-14);
  EXPECT_NEAR(thu, 0.0, 1e-14);
  const double u0[] = {0.0};
  EXPECT_NEAR(cartpole_cost({}, x, u0), 4.0, 1e-15);
  EXPECT_NEAR(cartpole_cost({}, up, u0), 0.0, 1e-15);
}

TEST(Cartpole, EquilibriaStayPut) {
  const CartpoleParams p;
  const double u0[] = {0.0};
  for (double theta : {0.0, kPi}) {
    const double x[] = {0.0, 0.0, theta, 0.0};
    double next[4];
    cartpole_step(p, x, u0, next);
    EXPECT_NEAR(next[0], 0.0, 1e-14);
    EXPECT_NEAR(next[1], 0.0, 1e-14);
    EXPECT_NEAR(next[2], theta, 1e-14);
    EXPECT_NEAR(next[3], 0.0, 1e-14);
  }
}

TEST(Cartpole, SmallSwingOscillatesAtPendulumFrequency) {
  // Heavy cart: near-fixed pivot, period 2 pi sqrt(l / g).
  CartpoleParams p;
  p.cart_mass = 1e6;
  p.dt = 1e-3;
  std::vector<double> x{0.0, 0.0, 0.05, 0.0}, next(4);
  const double u[] = {0.0};
  int crossings = 0;
  double first = -1, last = -1;
  for (int k = 0; k < 20000; ++k) {
    cartpole_step(p, x, u, next);
    if (x[2] > 0 && next[2] <= 0) {
      ++crossings;
      if (first < 0) first = k * p.dt;
      last = k * p.dt;
    }
    x = next;
  }
  const double period = (last - first) / (crossings - 1);
  EXPECT_NEAR(period, 2 * kPi * std::sqrt(p.pole_length / p.gravity), 0.01);
}

TEST(SingleTrack, StraightAccelerationFromRest) {
  const SingleTrackParams p;
  const CarState s = single_track_step(p, CarState{}, 0.0, 1.0);
  EXPECT_NEAR(s.vx, 0.05, 1e-15);
  // Ten semi-implicit substeps of h = 5 ms: x = h^2 (1 + ... + 10).
  EXPECT_NEAR(s.x, 0.005 * 0.005 * 55, 1e-15);
  EXPECT_EQ(s.y, 0.0);
  EXPECT_EQ(s.yaw, 0.0);
}

TEST(SingleTrack, KinematicYawRateAtLowSpeed) {
  SingleTrackParams p;
  p.substeps = 1;
  CarState s;
  s.vx = 0.3;
  const CarState n = single_track_step(p, s, 0.2, 0.0);
  EXPECT_NEAR(n.yaw_rate, 0.3 * std::tan(0.2) / p.wheelbase(), 1e-14);
  EXPECT_NEAR(n.vy, n.yaw_rate * p.lr, 1e-14);
}

TEST(SingleTrack, RestIsAFixedPoint) {
  const CarState n = single_track_step(SingleTrackParams{}, CarState{}, 0.0, 0.0);
  const auto a = n.to_array();
  for (double v : a) EXPECT_EQ(v, 0.0);
}

TEST(SingleTrack, KinematicTurningRadius) {
  // Slow steady turn: radius approaches wheelbase / delta for small delta.
  SingleTrackParams p;
  CarState s;
  s.vx = 0.3;
  const double delta = 0.05;
  for (int k = 0; k < 200; ++k) s = single_track_step(p, s, delta, 0.0);
  const double speed = std::hypot(s.vx, s.vy);
  EXPECT_NEAR(speed / s.yaw_rate, p.wheelbase() / delta, 0.01 * p.wheelbase() / delta);
}

TEST(SingleTrack, ControlsAndSpeedAreBounded) {
  const SingleTrackParams p;
  CarState s;
  for (int k = 0; k < 600; ++k) {
    s = single_track_step(p, s, 10.0, 10.0);
    ASSERT_TRUE(std::isfinite(s.x) && std::isfinite(s.vy) && std::isfinite(s.yaw_rate));
    ASSERT_LE(s.vx, p.max_speed);
    ASSERT_GE(s.vx, 0.0);
  }
  // Saturated inputs behave like the limits.
  CarState a, b;
  for (int k = 0; k < 20; ++k) {
    a = single_track_step(p, a, 10.0, 10.0);
    b = single_track_step(p, b, p.max_steer, p.max_accel);
  }
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.yaw, b.yaw);
}

TEST(Track, OvalGeometry) {
  const auto t = make_oval_track();
  EXPECT_NEAR(t->length(), kDefaultTrackLength, 1e-9);
  EXPECT_EQ(t->width(), kDefaultTrackWidth);
  EXPECT_EQ(t->points().front(), t->points().back());
  const CarState s = racing_start_state(*t);
  EXPECT_NEAR(s.x, 0.0, 1e-12);
  EXPECT_LT(s.y, 0.0);
  EXPECT_NEAR(s.yaw, 0.0, 1e-12);
  EXPECT_THROW(make_oval_track(5.0, 1.0, 1.5), std::invalid_argument);
}

TEST(Track, FrenetRoundTrip) {
  const auto t = make_oval_track();
  const auto& pts = t->points();
  for (std::size_t i = 0; i + 1 < pts.size(); i += 37) {
    const double dx = pts[i + 1][0] - pts[i][0], dy = pts[i + 1][1] - pts[i][1];
    const double len = std::hypot(dx, dy);
    const double s = t->arc_length()[i] + 0.5 * len;
    for (double n : {-0.4, 0.0, 0.4}) {
      const double x = 0.5 * (pts[i][0] + pts[i + 1][0]) - n * dy / len;
      const double y = 0.5 * (pts[i][1] + pts[i + 1][1]) + n * dx / len;
      const auto f = frenet_project(*t, x, y, std::atan2(dy, dx), 2.0, 0.0);
      EXPECT_NEAR(f.s, s, 1e-9) << i;
      EXPECT_NEAR(f.n, n, 1e-9) << i;
      EXPECT_NEAR(f.v_f, 2.0, 1e-9);
    }
  }
  const auto back = frenet_project(*t, 0.0, pts[0][1], kPi, 2.0, 0.0);
  EXPECT_NEAR(back.v_f, -2.0, 1e-9);
  EXPECT_THROW(frenet_project(*t, 100.0, 0.0, 0.0), std::out_of_range);
  EXPECT_FALSE(try_frenet_project(*t, 0.0, 50.0, 0.0).has_value());
}

TEST(Track, SignedOffsetAndOrigin) {
  const TrackSpec t({{0.0, 0.0}, {10.0, 0.0}, {10.0, 5.0}, {0.0, 5.0}}, 1.0);
  const auto left = frenet_project(t, 3.0, 0.3, 0.0);
  EXPECT_NEAR(left.s, 3.0, 1e-12);
  EXPECT_NEAR(left.n, 0.3, 1e-12);
  EXPECT_NEAR(frenet_project(t, 3.0, -0.3, 0.0).n, -0.3, 1e-12);
  EXPECT_NEAR(frenet_project(t, 0.0, 0.0, 0.0).s, 0.0, 1e-12);
  EXPECT_NEAR(frenet_project(t, 4.0, 0.0, 0.0).n, 0.0, 1e-9);
  // Just before the seam s approaches the loop length.
  EXPECT_NEAR(frenet_project(t, 0.0, 1e-6, -kPi / 2).s, t.length() - 1e-6, 1e-9);
}

TEST(Track, LoadsCsvAndClosesTheLoop) {
  const auto path = std::filesystem::temp_directory_path() / "lpmppi_square.csv";
  std::ofstream(path) << "x,y\n0,0\n2,0\n2,2\n0,2\n";
  const auto t = load_track_csv(path, 0.5);
  EXPECT_NEAR(t->length(), 8.0, 1e-12);
  EXPECT_EQ(t->points().size(), 5u);
  std::ofstream(path) << "x,y\n0,0\n2,zero\n";
  EXPECT_THROW(load_track_csv(path, 0.5), std::runtime_error);
}

TEST(RacingCost, HandValues) {
  // At the boundary softplus(0) = ln 2.
  EXPECT_NEAR(racing_cost(0.0, 0.5, 0.0, 0.0, 0.0, 1.0), 100 * std::log(2.0), 1e-12);
  EXPECT_NEAR(racing_cost(0.0, -0.5, 0.0, 0.0, 0.0, 1.0), 100 * std::log(2.0), 1e-12);
  EXPECT_NEAR(racing_cost(3.0, 0.0, 0.0, 0.0, 0.0, 1.0), -3.0, 1e-12);
  EXPECT_NEAR(racing_cost(0.0, 0.0, 0.5, 0.0, 0.0, 1.0), 20.0, 1e-12);
  EXPECT_NEAR(racing_cost(0.0, 0.0, -0.5, 0.0, 0.0, 1.0), 20.0, 1e-12);
  EXPECT_NEAR(racing_cost(0.0, 0.0, 0.0, kPi / 2, 0.0, 1.0), 2 * kPi * kPi / 4, 1e-12);
  EXPECT_NEAR(racing_cost(0.0, 0.0, 0.0, 2 * kPi + 0.1, 0.0, 1.0), 0.02, 1e-12);
  const double centre = racing_cost(1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
  EXPECT_NEAR(centre, -1.0, 1e-15);
  const double boundary = 100.0 * std::log1p(std::exp(-50.0));
  EXPECT_NEAR(racing_cost(0.0, 0.0, 0.0, 0.0, 0.0, 1.0), boundary, 1e-6 * boundary);
  EXPECT_EQ(racing_cost(0.0, 0.0, 0.3, 0.0, 0.0, 1.0), racing_cost(0.0, 0.0, 0.0, 0.0, 0.0, 1.0));
  // Far outside: the softplus is linear and finite.
  EXPECT_NEAR(racing_cost(0.0, 5.5, 0.0, 0.0, 0.0, 1.0), 100 * 100 * 5.0, 1e-6);
}

TEST(RacingCost, MonotoneInOffsetAndSpeed) {
  double prev = -1e300;
  for (double n = 0.0; n <= 1.0; n += 0.01) {
    const double c = racing_cost(1.0, n, 0.0, 0.0, 0.0, 1.0);
    EXPECT_GE(c, prev);
    prev = c;
  }
  EXPECT_LT(racing_cost(2.0, 0.1, 0.0, 0.0, 0.0, 1.0),
            racing_cost(1.0, 0.1, 0.0, 0.0, 0.0, 1.0));
}

TEST(RacingOcp, OffTrackStatesArePenalized) {
  RacingSetup setup{SingleTrackParams{}, make_oval_track()};
  const auto ocp = make_racing_ocp(setup, 30);
  EXPECT_EQ(ocp.state_dim, 6);
  EXPECT_EQ(ocp.control_dim, 2);
  const double far[] = {100.0, 100.0, 0.0, 1.0, 0.0, 0.0};
  const double u[] = {0.0, 0.0};
  EXPECT_EQ(ocp.step_cost(far, u), 1e5);
  const auto start = racing_start_state(*setup.track).to_array();
  EXPECT_NEAR(ocp.step_cost(start, u), 100 * std::log1p(std::exp(-50.0)), 1e-12);
}

}  // namespace
}  // namespace lpmppi::env
