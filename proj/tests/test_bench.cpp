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

#include <filesystem>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "bench/csv.hpp"
#include "lpmppi/bench.hpp"

namespace lpmppi::bench {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("lpmppi_bench_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

constexpr const char* kSmallSweep = R"(
environment:
  id: pendulum
horizon: 10
steps: 25
seeds: [3, 4]
sweep:
  horizons: [8, 12]
  rollouts: [8, 16]
controllers:
  - {name: white, variant: mppi, sigma: [1.0], lambda: 10}
  - {name: lowpass, variant: lp_mppi, sigma: [1.0], lambda: 10, cutoff_hz: 2.0}
)";

TEST(Config, DefaultsAndOverrides) {
  const auto c = parse_config(R"(
environment: {id: pendulum, pendulum: {torque_limit: 1.5}}
controllers: [{variant: lp_mppi, sigma: [0.8], cutoff_hz: 3}]
seeds: {count: 3, start: 10}
)");
  EXPECT_EQ(c.environment.pendulum.torque_limit, 1.5);
  EXPECT_EQ(c.environment.pendulum.mass, 1.0);
  ASSERT_EQ(c.controllers.size(), 1u);
  EXPECT_EQ(c.controllers[0].name, "lp_mppi");
  EXPECT_EQ(c.controllers[0].config.sampler.fc_hz, 3.0);
  EXPECT_EQ(c.controllers[0].config.sampler.kind, sampling::NoiseKind::kLowpass);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{10, 11, 12}));
  EXPECT_EQ(c.horizon, 30);
  EXPECT_DOUBLE_EQ(c.environment.dt(), 0.05);
}

TEST(Config, ErrorsNameTheOffendingKey) {
  auto message = [](const char* yaml) {
    try {
      parse_config(yaml);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("controllers: [{variant: mppi, sigma: [1], lamda: 2}]")
                .find("lamda"),
            std::string::npos);
  EXPECT_NE(message("controllers: [{variant: ilqr}]").find("variant"), std::string::npos);
  EXPECT_NE(message("controllers: [{variant: mppi}]\nhorizon: zero").find("horizon"),
            std::string::npos);
  EXPECT_NE(message("controllers: []").find("controllers"), std::string::npos);
  EXPECT_NE(message("environment: {id: boat}\ncontrollers: [{variant: mppi}]")
                .find("boat"),
            std::string::npos);
  EXPECT_NE(message("controllers: [{name: a}, {name: a}]").find("duplicate"),
            std::string::npos);
  EXPECT_NE(message("{unclosed").find("config"), std::string::npos);
}

TEST(Config, DumpRoundTripsAndFingerprintTracksContent) {
  const auto c = parse_config(kSmallSweep);
  const std::string dump = dump_config(c);
  const auto again = parse_config(dump);
  EXPECT_EQ(dump_config(again), dump);
  EXPECT_EQ(fingerprint(again), fingerprint(c));
  EXPECT_EQ(fingerprint(c).size(), 16u);
  auto changed = c;
  changed.controllers[1].config.sampler.fc_hz = 2.5;
  EXPECT_NE(fingerprint(changed), fingerprint(c));
}

TEST(Config, ShippedConfigsParse) {
  int seen = 0;
  for (const auto& e : fs::directory_iterator(LPMPPI_CONFIG_DIR)) {
    if (e.path().extension() != ".yaml") continue;
    EXPECT_NO_THROW(load_config(e.path())) << e.path();
    ++seen;
  }
  EXPECT_GE(seen, 3);
}

TEST(Episode, DeterministicAndShaped) {
  auto c = parse_config(kSmallSweep);
  c.sweep.reset();
  const auto a = run_episode(c, 3, 1);
  const auto b = run_episode(c, 3, 1);
  const auto d = run_episode(c, 4, 1);
  EXPECT_EQ(a.applied_controls, b.applied_controls);
  EXPECT_EQ(a.states, b.states);
  EXPECT_NE(a.applied_controls, d.applied_controls);
  EXPECT_EQ(a.applied_controls.rows(), 25);
  EXPECT_EQ(a.states.rows(), 26);
  EXPECT_EQ(a.steps(), 25);
  EXPECT_EQ(a.compute_seconds.size(), 25u);
  EXPECT_EQ(a.config_fingerprint, fingerprint(c));
  EXPECT_FALSE(a.terminated_early);
  EXPECT_THROW(run_episode(c, 3, 2), std::out_of_range);
}

TEST(Episode, ZeroStepsGiveEmptyLogs) {
  auto c = parse_config(kSmallSweep);
  c.sweep.reset();
  c.steps = 0;
  const auto r = run_episode(c, 3);
  EXPECT_EQ(r.steps(), 0);
  EXPECT_EQ(r.applied_controls.rows(), 0);
  EXPECT_EQ(r.states.rows(), 1);
  EXPECT_EQ(r.cumulative_cost(), 0.0);
}

double wrapped_distance_to_upright(double theta) {
  return std::abs(std::remainder(theta - std::numbers::pi, 2.0 * std::numbers::pi));
}

TEST(Episode, LowpassControllerSwingsThePendulumUp) {
  auto c = parse_config(R"(
environment: {id: pendulum}
horizon: 30
steps: 300
seeds: {count: 20, start: 0}
controllers:
  - {variant: lp_mppi, sigma: [1.0], lambda: 30, rollouts: 64, cutoff_hz: 1.0, order: 4}
)");
  int held = 0;
  for (auto seed : c.seeds) {
    const auto r = run_episode(c, seed);
    bool ok = !r.terminated_early;
    for (Eigen::Index t = r.states.rows() - 50; ok && t < r.states.rows(); ++t) {
      ok = wrapped_distance_to_upright(r.states(t, 0)) < 0.2;
    }
    held += ok ? 1 : 0;
  }
  EXPECT_GE(held, 16);
}

TEST(Episode, WideOpenLowpassCostsLikeWhiteNoise) {
  auto c = parse_config(R"(
environment: {id: pendulum}
horizon: 30
steps: 200
seeds: {count: 10, start: 0}
controllers:
  - {variant: mppi, sigma: [1.0], lambda: 30, rollouts: 64}
  - {variant: lp_mppi, sigma: [1.0], lambda: 30, rollouts: 64, cutoff_hz: 9.8, order: 1}
)");
  double white = 0.0, lowpass = 0.0;
  for (auto seed : c.seeds) {
    white += run_episode(c, seed, 0).cumulative_cost();
    lowpass += run_episode(c, seed, 1).cumulative_cost();
  }
  EXPECT_NEAR(lowpass / white, 1.0, 0.1);
}

TEST(Episode, RacingLogsDistance) {
  auto c = parse_config(R"(
environment: {id: racing}
horizon: 10
steps: 40
controllers: [{variant: lp_mppi, sigma: [0.2, 1.5], rollouts: 16, cutoff_hz: 2}]
)");
  const auto env = make_environment(c.environment, c.horizon);
  const auto r = run_episode(c, 0);
  const auto s = metrics::episode_summary(r, env.track.get());
  ASSERT_TRUE(s.distance.has_value());
  EXPECT_GT(*s.distance, 0.5);
}

TEST(Sweep, OrderingWorkerIndependenceAndByteIdenticalCsv) {
  auto c = parse_config(kSmallSweep);
  const auto one = run_sweep(c);
  ASSERT_EQ(one.cells.size(), 8u);
  ASSERT_EQ(one.episodes.size(), 16u);
  EXPECT_EQ(one.cells[0].horizon, 8);
  EXPECT_EQ(one.cells[0].rollouts, 8);
  EXPECT_EQ(one.cells[1].controller, "lowpass");
  EXPECT_EQ(one.cells[2].rollouts, 16);
  EXPECT_EQ(one.cells[4].horizon, 12);
  EXPECT_EQ(one.improvements.size(), 4u);

  c.workers = 3;
  const auto three = run_sweep(c);
  const auto d1 = scratch("w1"), d3 = scratch("w3");
  write_sweep(one, c, d1);
  write_sweep(three, c, d3);
  for (const char* f : {"episodes.csv", "aggregate.csv", "improvement.csv"}) {
    EXPECT_EQ(slurp(d1 / f), slurp(d3 / f)) << f;
    EXPECT_EQ(slurp(d1 / f).rfind("# lpmppi ", 0), 0u) << f;
  }
  EXPECT_FALSE(fs::exists(d1 / "timings.csv"));
  EXPECT_EQ(dump_config(load_config(d1 / "config.yaml")), dump_config(c));
}

TEST(Sweep, FailingCellIsIsolated) {
  auto c = parse_config(R"(
environment: {id: pendulum}
steps: 15
seeds: [0]
sweep: {horizons: [3, 10], rollouts: [8]}
controllers: [{variant: scp_mppi, sigma: [1.0], knots: 5}]
)");
  const auto r = run_sweep(c);
  ASSERT_EQ(r.cells.size(), 2u);
  EXPECT_EQ(r.cells[0].episodes_failed, 1);
  EXPECT_NE(r.episodes[0].error.find("knots"), std::string::npos);
  EXPECT_EQ(r.cells[1].episodes_ok, 1);
  EXPECT_TRUE(std::isfinite(r.cells[1].mean_cost));
}

TEST(Sweep, ImprovementTableHandComputed) {
  std::vector<SweepCell> cells(3);
  cells[0] = {0, 30, 64, "mppi", "mppi", 1, 0, 100.0, 0, 0, {}};
  cells[1] = {1, 30, 64, "lp", "lp_mppi", 1, 0, 90.0, 0, 0, {}};
  cells[2] = {2, 30, 64, "neg", "smppi", 1, 0, -50.0, 0, 0, {}};
  const auto t = improvement_table(cells);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].baseline, "mppi");
  EXPECT_DOUBLE_EQ(t[0].improvement, 0.1);
  EXPECT_DOUBLE_EQ(t[1].improvement, (-50.0 - 90.0) / 50.0);
}

TEST(Timing, MedianOverhead) {
  const auto rows = timing_report({{"mppi", {3.0, 1.0, 2.0}}, {"lp_mppi", {2.1, 2.1, 9.0}}});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].name, "lp_mppi");
  EXPECT_NEAR(rows[0].overhead_percent, 5.0, 1e-12);
  EXPECT_DOUBLE_EQ(rows[1].overhead_percent, 0.0);
  EXPECT_THROW(timing_report({{"lp", {1.0}}}), std::invalid_argument);
  EXPECT_THROW(timing_report({{"mppi", {}}}), std::invalid_argument);
}

TEST(SpectrumFit, RecoversItsOwnParameters) {
  SpectrumFitGrid grid;
  grid.cutoffs_hz = {1.0, 2.0, 4.0};
  grid.orders = {1, 2, 4};
  grid.betas = {0.0, 1.0, 2.0};
  grid.realizations = 60;
  grid.length = 128;
  sampling::SamplerSpec truth;
  truth.kind = sampling::NoiseKind::kLowpass;
  truth.sigma = {1.0};
  truth.control_rate_hz = 20.0;
  truth.fc_hz = 2.0;
  truth.order = 4;
  const auto ref = sampler_spectrum(truth, 60, 128, 99);
  const auto fit = fit_sampler_spectrum(ref, sampling::NoiseKind::kLowpass, grid);
  EXPECT_FALSE(fit.resampled);
  EXPECT_EQ(fit.spec.fc_hz, 2.0);
  EXPECT_EQ(fit.spec.order, 4);
  EXPECT_EQ(fit.candidates.size(), 9u);
  EXPECT_NEAR(fit.reference.total_power(), 1.0, 1e-12);

  truth.kind = sampling::NoiseKind::kColored;
  truth.beta = 2.0;
  const auto cref = sampler_spectrum(truth, 60, 128, 5);
  EXPECT_EQ(fit_sampler_spectrum(cref, sampling::NoiseKind::kColored, grid).spec.beta, 2.0);

  // Off-grid bins are interpolated.
  dsp::Spectrum coarse{{0.0, 3.0, 6.0, 9.0}, {1.0, 1.0, 0.1, 0.01}};
  EXPECT_TRUE(fit_sampler_spectrum(coarse, sampling::NoiseKind::kLowpass, grid).resampled);
}

TEST(SpectrumFit, WhiteReferencePrefersWhite) {
  sampling::SamplerSpec white;
  white.kind = sampling::NoiseKind::kWhite;
  white.sigma = {1.0};
  white.control_rate_hz = 20.0;
  const auto ref = sampler_spectrum(white, 100, 128, 7);
  SpectrumFitGrid grid;
  grid.cutoffs_hz = {0.5};
  grid.orders = {2};
  grid.realizations = 100;
  const auto as_white = fit_sampler_spectrum(ref, sampling::NoiseKind::kWhite, grid);
  const auto as_lowpass = fit_sampler_spectrum(ref, sampling::NoiseKind::kLowpass, grid);
  EXPECT_LT(as_white.error, as_lowpass.error);
  // A single-point grid returns that point.
  ASSERT_EQ(as_lowpass.candidates.size(), 1u);
  EXPECT_EQ(as_lowpass.spec.fc_hz, 0.5);
  EXPECT_EQ(as_lowpass.spec.order, 2);
}

TEST(Sweep, DegenerateGridHasOneEpisodeRow) {
  const auto dir = scratch("single");
  auto c = parse_config(R"(
environment: {id: pendulum}
horizon: 5
steps: 5
seeds: [1]
sweep: {horizons: [5], rollouts: [4]}
controllers: [{variant: mppi, sigma: [1.0]}]
)");
  write_sweep(run_sweep(c), c, dir);
  const auto table = detail::read_csv(dir / "episodes.csv");
  EXPECT_EQ(table.rows.size(), 1u);
}

TEST(Plots, RenderDeterministicallyAndReportBadFiles) {
  const auto dir = scratch("plots");
  auto c = parse_config(kSmallSweep);
  write_sweep(run_sweep(c), c, dir);
  dsp::write_spectrum_csv({{0.0, 1.0, 2.0}, {1.0, 0.5, 0.1}}, dir / "psd_demo.csv");
  std::ofstream(dir / "controls.csv") << "controller,seed,step,dim,value\n"
                                         "a,0,0,0,0.5\na,0,1,0,0.25\n";
  const auto first = emit_plots(dir);
  EXPECT_TRUE(first.errors.empty());
  ASSERT_GE(first.written.size(), 4u);
  std::vector<std::string> bytes;
  for (const auto& p : first.written) bytes.push_back(slurp(p));
  const auto second = emit_plots(dir);
  for (std::size_t i = 0; i < bytes.size(); ++i) EXPECT_EQ(slurp(second.written[i]), bytes[i]);

  std::ofstream(dir / "aggregate.csv") << "cell,horizon\n0,1,2\n";
  const auto bad = emit_plots(dir);
  ASSERT_EQ(bad.errors.size(), 1u);
  EXPECT_NE(slurp(dir / "plot_errors.txt").find("aggregate.csv"), std::string::npos);

  const auto empty = scratch("plots_empty");
  std::ofstream(empty / "aggregate.csv")
      << "# lpmppi aggregate v1\ncell,horizon,rollouts,controller,variant,"
         "episodes_ok,episodes_failed,mean_cost,mean_mssd,mean_msgfd,median_distance_m\n";
  emit_plots(empty);
  EXPECT_TRUE(fs::exists(empty / "heatmap_NOTICE.txt"));
}

}  // namespace
}  // namespace lpmppi::bench
