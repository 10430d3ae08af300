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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpmppi/environments.hpp"
#include "lpmppi/types.hpp"

namespace lpmppi::metrics {

/// Closed-loop log of one episode.
struct EpisodeResult {
  Matrix applied_controls;              // T x m
  Matrix states;                        // (T+1) x n
  std::vector<double> step_costs;       // T
  std::vector<double> compute_seconds;  // T, controller wall-clock per tick
  std::uint64_t seed = 0;
  std::string config_fingerprint;
  bool terminated_early = false;
  std::string termination_reason;
  int controller_errors = 0;  // ticks that fell back to the previous plan

  int steps() const { return static_cast<int>(step_costs.size()); }
  double cumulative_cost() const;
};

/// Mean over interior steps and dimensions of (u[t+1] - 2u[t] + u[t-1])^2,
/// unit-step differences. Throws std::invalid_argument for T < 3.
double mssd(const Matrix& signal);

/// Mean over steps and dimensions of (u - SG(u))^2. Throws for T < window.
double msgfd(const Matrix& signal, int window = 11, int polyorder = 3);

/// sorted[(n - 1) / 2]. Throws std::invalid_argument on an empty input.
double lower_median(std::vector<double> values);

/// Unwrapped arc-length progress along the track over the (x, y) columns of
/// `states`. States that cannot be projected are skipped.
double distance_covered(const env::TrackSpec& track, const Matrix& states);

struct SmoothnessOptions {
  int window = 11;
  int polyorder = 3;
};

struct EpisodeSummary {
  int steps = 0;
  double cumulative_cost = 0.0;
  double mssd = 0.0;   // NaN when the episode is too short
  double msgfd = 0.0;  // NaN when the episode is too short
  double median_compute_seconds = 0.0;  // NaN for an empty episode
  std::optional<double> distance;       // racing only
};

EpisodeSummary episode_summary(const EpisodeResult& result,
                               const env::TrackSpec* track = nullptr,
                               SmoothnessOptions options = {});

/// `steps,cumulative_cost,mssd,msgfd,median_compute_s,distance_m`
std::string summary_csv_header();
std::string summary_csv_row(const EpisodeSummary& summary);

}  // namespace lpmppi::metrics
