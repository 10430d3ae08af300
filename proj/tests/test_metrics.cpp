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

#include <Eigen/QR>
#include <algorithm>
#include <cmath>

#include "lpmppi/dsp.hpp"
#include "lpmppi/metrics.hpp"

namespace lpmppi::metrics {
namespace {

// Least-squares polynomial fit over the window around each sample, truncated
// at the sequence ends.
Matrix sg_oracle(const Matrix& x, int window, int order) {
  const int n = static_cast<int>(x.rows()), half = window / 2;
  Matrix out(x.rows(), x.cols());
  for (int t = 0; t < n; ++t) {
    const int start = std::max(0, t - half);
    const int span = std::min(n - 1, t + half) - start + 1;
    const int degree = std::min(order, span - 1);
    Eigen::MatrixXd v(span, degree + 1);
    for (int i = 0; i < span; ++i) {
      for (int p = 0; p <= degree; ++p) v(i, p) = std::pow(start + i - t, p);
    }
    for (Eigen::Index d = 0; d < x.cols(); ++d) {
      const Eigen::VectorXd coef =
          v.householderQr().solve(x.col(d).segment(start, span));
      out(t, d) = coef[0];
    }
  }
  return out;
}

TEST(Mssd, AlternatingSequence) {
  Matrix u(5, 1);
  u << 0, 1, 0, 1, 0;
  EXPECT_DOUBLE_EQ(mssd(u), 4.0);
  Matrix line(6, 2);
  for (int t = 0; t < 6; ++t) line.row(t) << 2.0 * t, -t + 1.0;
  EXPECT_NEAR(mssd(line), 0.0, 1e-24);
  EXPECT_THROW(mssd(Matrix::Zero(2, 1)), std::invalid_argument);
}

TEST(Msgfd, MatchesLeastSquaresOracle) {
  Rng rng(4);
  Matrix u(40, 2);
  for (Eigen::Index i = 0; i < u.size(); ++i) u.data()[i] = rng.normal();
  const Matrix s = sg_oracle(u, 11, 3);
  EXPECT_NEAR(msgfd(u, 11, 3), (u - s).squaredNorm() / u.size(), 1e-12);

  Matrix cubic(20, 1);
  for (int t = 0; t < 20; ++t) cubic(t, 0) = 0.01 * t * t * t - t;
  EXPECT_NEAR(msgfd(cubic), 0.0, 1e-18);
  EXPECT_THROW(msgfd(Matrix::Zero(10, 1)), std::invalid_argument);
}

TEST(Mssd, TranslationInvariantAndQuadraticInAmplitude) {
  Rng rng(6);
  Matrix u(50, 2);
  for (Eigen::Index i = 0; i < u.size(); ++i) u.data()[i] = rng.normal();
  const double base = mssd(u);
  EXPECT_NEAR(mssd((u.array() + 3.5).matrix()), base, 1e-12 * base);
  EXPECT_NEAR(mssd(2.5 * u), 6.25 * base, 1e-12 * base);
  EXPECT_EQ(mssd(Matrix::Constant(8, 1, 4.0)), 0.0);
}

TEST(Msgfd, WhiteNoiseDeviatesMoreThanItsLowpassedCopy) {
  const auto cascade = dsp::design_butterworth_lowpass(0.1, 4);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    Matrix u(200, 1);
    for (Eigen::Index i = 0; i < u.size(); ++i) u.data()[i] = rng.normal();
    const double white = msgfd(u);
    EXPECT_GE(white, 0.0);
    EXPECT_GT(white, msgfd(dsp::apply_filter(cascade, u))) << seed;
  }
  EXPECT_NEAR(msgfd(Matrix::Constant(30, 2, -1.0)), 0.0, 1e-24);
}

TEST(Median, LowerMedian) {
  EXPECT_EQ(lower_median({3, 1, 2, 4}), 2);
  EXPECT_EQ(lower_median({5, 1, 3}), 3);
  EXPECT_THROW(lower_median({}), std::invalid_argument);
}

TEST(Distance, UnwrapsLapsAndDirection) {
  const auto track = env::make_oval_track();
  const auto& pts = track->points();
  const int per_lap = static_cast<int>(pts.size()) - 1;
  const int steps = per_lap * 3 / 2;
  Matrix forward(steps + 1, 6), backward(steps + 1, 6);
  forward.setZero();
  backward.setZero();
  for (int k = 0; k <= steps; ++k) {
    const auto& p = pts[k % per_lap];
    forward(k, 0) = p[0];
    forward(k, 1) = p[1];
    const auto& q = pts[(per_lap - k % per_lap) % per_lap];
    backward(k, 0) = q[0];
    backward(k, 1) = q[1];
  }
  const double expected = track->arc_length()[steps % per_lap] + track->length();
  EXPECT_NEAR(distance_covered(*track, forward), expected, 1e-9);
  const int back_end = (per_lap - steps % per_lap) % per_lap;
  EXPECT_NEAR(distance_covered(*track, backward),
              -(2.0 * track->length() - track->arc_length()[back_end]), 1e-9);
}

TEST(Distance, ConstantSpeedAlongTheCenterline) {
  // 30 s at 1 m/s with 50 ms steps, starting on the first straight.
  const auto track = env::make_oval_track();
  Matrix states = Matrix::Zero(601, 6);
  const auto& pts = track->points();
  const auto& arc = track->arc_length();
  for (int k = 0; k <= 600; ++k) {
    const double s = std::fmod(0.05 * k, track->length());
    std::size_t i = 0;
    while (arc[i + 1] < s) ++i;
    const double a = (s - arc[i]) / (arc[i + 1] - arc[i]);
    states(k, 0) = pts[i][0] + a * (pts[i + 1][0] - pts[i][0]);
    states(k, 1) = pts[i][1] + a * (pts[i + 1][1] - pts[i][1]);
  }
  EXPECT_NEAR(distance_covered(*track, states), 30.0, 1e-9);
  EXPECT_EQ(distance_covered(*track, Matrix::Zero(20, 6)), 0.0);
}

TEST(Summary, ShortEpisodesAndCsv) {
  EpisodeResult r;
  r.applied_controls = Matrix::Zero(2, 1);
  r.states = Matrix::Zero(3, 2);
  r.step_costs = {1.0, 2.5};
  r.compute_seconds = {0.2, 0.1};
  const auto s = episode_summary(r);
  EXPECT_EQ(s.steps, 2);
  EXPECT_DOUBLE_EQ(s.cumulative_cost, 3.5);
  EXPECT_TRUE(std::isnan(s.mssd));
  EXPECT_TRUE(std::isnan(s.msgfd));
  EXPECT_DOUBLE_EQ(s.median_compute_seconds, 0.1);
  EXPECT_FALSE(s.distance.has_value());
  EXPECT_EQ(summary_csv_header(),
            "steps,cumulative_cost,mssd,msgfd,median_compute_s,distance_m");
  EXPECT_EQ(summary_csv_row(s).substr(0, 6), "2,3.5,");
}

}  // namespace
}  // namespace lpmppi::metrics
