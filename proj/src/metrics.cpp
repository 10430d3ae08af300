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

#include "lpmppi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "lpmppi/dsp.hpp"

namespace lpmppi::metrics {

double EpisodeResult::cumulative_cost() const {
  double sum = 0.0;
  for (double c : step_costs) sum += c;
  return sum;
}

double mssd(const Matrix& signal) {
  const Eigen::Index t = signal.rows();
  if (t < 3) throw std::invalid_argument("mssd: need at least 3 samples");
  double sum = 0.0;
  for (Eigen::Index i = 1; i + 1 < t; ++i) {
    for (Eigen::Index d = 0; d < signal.cols(); ++d) {
      const double dd = signal(i + 1, d) - 2.0 * signal(i, d) + signal(i - 1, d);
      sum += dd * dd;
    }
  }
  return sum / static_cast<double>((t - 2) * signal.cols());
}

double msgfd(const Matrix& signal, int window, int polyorder) {
  if (signal.rows() < window) {
    throw std::invalid_argument("msgfd: signal shorter than the window");
  }
  const Matrix smooth = dsp::savitzky_golay_smooth(signal, window, polyorder);
  return (signal - smooth).squaredNorm() / static_cast<double>(signal.size());
}

double lower_median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  const auto mid = values.begin() + (values.size() - 1) / 2;
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

double distance_covered(const env::TrackSpec& track, const Matrix& states) {
  const double length = track.length();
  double total = 0.0;
  std::optional<double> last;
  for (Eigen::Index t = 0; t < states.rows(); ++t) {
    const auto f = env::try_frenet_project(track, states(t, 0), states(t, 1), 0.0);
    if (!f) continue;
    if (last) total += std::remainder(f->s - *last, length);
    last = f->s;
  }
  return total;
}

EpisodeSummary episode_summary(const EpisodeResult& result,
                               const env::TrackSpec* track,
                               SmoothnessOptions options) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  EpisodeSummary s;
  s.steps = result.steps();
  s.cumulative_cost = result.cumulative_cost();
  const Eigen::Index t = result.applied_controls.rows();
  s.mssd = t >= 3 ? mssd(result.applied_controls) : nan;
  s.msgfd = t >= options.window && t >= 3
                ? msgfd(result.applied_controls, options.window, options.polyorder)
                : nan;
  s.median_compute_seconds =
      result.compute_seconds.empty() ? nan : lower_median(result.compute_seconds);
  if (track != nullptr) s.distance = distance_covered(*track, result.states);
  return s;
}

std::string summary_csv_header() {
  return "steps,cumulative_cost,mssd,msgfd,median_compute_s,distance_m";
}

std::string summary_csv_row(const EpisodeSummary& s) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10g,%.6g,", s.steps,
                s.cumulative_cost, s.mssd, s.msgfd, s.median_compute_seconds);
  std::string row = buf;
  if (s.distance) {
    std::snprintf(buf, sizeof buf, "%.6f", *s.distance);
    row += buf;
  }
  return row;
}

}  // namespace lpmppi::metrics
