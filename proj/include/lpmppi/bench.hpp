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
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lpmppi/dsp.hpp"
#include "lpmppi/environments.hpp"
#include "lpmppi/metrics.hpp"
#include "lpmppi/mpc.hpp"

namespace lpmppi::bench {

// ---------------------------------------------------------------------------
// Configuration. The on-disk grammar is YAML; see configs/ and the README.

struct EnvironmentConfig {
  std::string id = "pendulum";  // pendulum | cartpole | racing
  env::PendulumParams pendulum;
  env::PendulumCost pendulum_cost;
  env::CartpoleParams cartpole;
  env::CartpoleCost cartpole_cost;
  env::SingleTrackParams car;
  std::string track_csv;  // empty: built-in oval
  double track_length = env::kDefaultTrackLength;
  double track_width = env::kDefaultTrackWidth;
  double track_radius = 1.5;
  std::vector<double> initial_state;  // empty: environment default

  double dt() const;
};

struct NamedController {
  std::string name;
  mpc::ControllerConfig config;
};

struct SweepAxes {
  std::vector<int> horizons;
  std::vector<int> rollouts;
};

struct BenchConfig {
  EnvironmentConfig environment;
  std::vector<NamedController> controllers;
  int horizon = 30;
  int steps = 300;
  std::vector<std::uint64_t> seeds{0};
  std::optional<SweepAxes> sweep;
  std::string output_dir = "out";
  int workers = 1;
  metrics::SmoothnessOptions smoothness;

  /// Throws std::invalid_argument naming the offending key.
  void validate() const;
  const NamedController& controller(const std::string& name) const;
};

BenchConfig parse_config(const std::string& yaml_text);
BenchConfig load_config(const std::filesystem::path& path);
/// Full configuration with every default spelled out; parse_config(dump)
/// reproduces the input.
std::string dump_config(const BenchConfig& config);
/// Stable 16-hex-digit hash of dump_config().
std::string fingerprint(const BenchConfig& config);

// ---------------------------------------------------------------------------
// Episodes.

struct Environment {
  std::string id;
  mpc::OCPSpec ocp;
  Vector initial_state;
  std::shared_ptr<const env::TrackSpec> track;  // racing only
};

Environment make_environment(const EnvironmentConfig& config, int horizon);

/// Stream label mixed into the seed for the controller's sampling RNG.
inline constexpr std::uint64_t kControllerStream = 0x4c50'4d50'5049ULL;

/// Closed loop for config.steps ticks with controller `controller_index`.
/// The controller's batch seed at tick k is the k-th draw of
/// Rng(derive_seed(seed, {kControllerStream})), so the result is a pure
/// function of (config, seed). A nonfinite true state ends the episode early
/// with the partial logs.
metrics::EpisodeResult run_episode(const BenchConfig& config, std::uint64_t seed,
                                   std::size_t controller_index = 0);

// ---------------------------------------------------------------------------
// Sweeps.

struct SweepEpisode {
  int cell = 0;
  int horizon = 0;
  int rollouts = 0;
  std::string controller;
  std::string variant;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  metrics::EpisodeSummary summary;
};

struct SweepCell {
  int cell = 0;
  int horizon = 0;
  int rollouts = 0;
  std::string controller;
  std::string variant;
  int episodes_ok = 0;
  int episodes_failed = 0;
  double mean_cost = 0.0;
  double mean_mssd = 0.0;
  double mean_msgfd = 0.0;
  std::optional<double> median_distance;
};

struct Improvement {
  int horizon = 0;
  int rollouts = 0;
  std::string baseline;
  double improvement = 0.0;  // (cost_base - cost_lp) / |cost_base|
};

struct SweepResult {
  std::vector<SweepEpisode> episodes;
  std::vector<SweepCell> cells;
  std::vector<Improvement> improvements;
};

/// Cartesian product (H, N, controller) x seeds. Episodes run on
/// config.workers threads; every output is ordered by (cell, seed index).
/// A cell whose episodes throw is recorded as failed; others are unaffected.
SweepResult run_sweep(const BenchConfig& config);

/// episodes.csv, aggregate.csv, improvement.csv and config.yaml. Wall-clock
/// timings are left out so reruns are byte-identical; see timing_report().
void write_sweep(const SweepResult& result, const BenchConfig& config,
                 const std::filesystem::path& dir);

/// Per-cell improvement of the first lp_mppi controller over every other.
std::vector<Improvement> improvement_table(const std::vector<SweepCell>& cells);

// ---------------------------------------------------------------------------
// Spectrum fitting.

struct SpectrumFitGrid {
  double control_rate_hz = 20.0;
  std::vector<double> cutoffs_hz;  // lowpass
  std::vector<int> orders;         // lowpass
  std::vector<double> betas;       // colored
  int realizations = 100;
  int length = 256;  // used when the reference bins must be resampled
  std::uint64_t seed = 0;
};

struct SpectrumFitCandidate {
  sampling::SamplerSpec spec;
  double error = 0.0;
};

struct SpectrumFit {
  sampling::SamplerSpec spec;
  double error = 0.0;
  bool resampled = false;  // reference interpolated onto the synthesis bins
  std::vector<SpectrumFitCandidate> candidates;
  dsp::Spectrum reference;  // normalized, on the synthesis bins
  dsp::Spectrum best;       // normalized
};

/// Grid search for the `family` parameters whose unit-variance ensemble PSD
/// is closest in L2 to `reference` after both are normalized to unit total
/// power. Ties go to the lower cutoff, beta or order.
SpectrumFit fit_sampler_spectrum(const dsp::Spectrum& reference,
                                 sampling::NoiseKind family,
                                 const SpectrumFitGrid& grid);

/// Averaged periodogram of `realizations` unit-variance sequences of
/// `length` samples from `spec`.
dsp::Spectrum sampler_spectrum(const sampling::SamplerSpec& spec,
                               int realizations, int length,
                               std::uint64_t seed);

// ---------------------------------------------------------------------------
// Timing.

struct TimingRow {
  std::string name;
  double median_seconds = 0.0;
  double overhead_percent = 0.0;  // relative to the baseline median
};

/// Median compute time per entry and overhead relative to `baseline`.
/// Throws std::invalid_argument if the baseline is missing or any timing
/// vector is empty.
std::vector<TimingRow> timing_report(
    const std::map<std::string, std::vector<double>>& times,
    const std::string& baseline = "mppi");

// ---------------------------------------------------------------------------
// Plots.

struct PlotReport {
  std::vector<std::filesystem::path> written;
  std::vector<std::string> errors;
};

/// Renders SVGs for the CSVs found in `dir`: psd_*.csv overlays,
/// aggregate.csv heatmaps, controls.csv time series (one per control
/// dimension) and distance box summaries from episodes.csv. Output is
/// byte-identical for identical inputs. A malformed file is reported in
/// plot_errors.txt and skipped.
PlotReport emit_plots(const std::filesystem::path& dir);

}  // namespace lpmppi::bench
