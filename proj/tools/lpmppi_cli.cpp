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

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include "bench/csv.hpp"
#include "lpmppi/bench.hpp"

namespace fs = std::filesystem;
using namespace lpmppi;

namespace {

struct Common {
  std::string config;
  std::string output;
  int workers = 0;
  std::optional<std::uint64_t> seed;
  int seed_count = 0;
};

bench::BenchConfig load(const Common& c) {
  auto cfg = bench::load_config(c.config);
  if (!c.output.empty()) cfg.output_dir = c.output;
  if (c.workers > 0) cfg.workers = c.workers;
  if (c.seed_count > 0) {
    cfg.seeds.clear();
    for (int i = 0; i < c.seed_count; ++i) cfg.seeds.push_back(static_cast<std::uint64_t>(i));
  }
  if (c.seed) cfg.seeds = {*c.seed};
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("-c,--config", c.config, "YAML configuration")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("-o,--output", c.output, "Output directory (overrides config)");
  app->add_option("-j,--workers", c.workers, "Worker threads (overrides config)")
      ->check(CLI::PositiveNumber);
  auto* single =
      app->add_option("-s,--seed", c.seed, "Run this single seed instead of the list");
  app->add_option("--seeds", c.seed_count, "Run seeds 0..N-1 instead of the list")
      ->check(CLI::PositiveNumber)
      ->excludes(single);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

int cmd_run(const Common& common) {
  auto cfg = load(common);
  cfg.sweep.reset();
  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);

  struct Item {
    std::size_t controller;
    std::uint64_t seed;
    metrics::EpisodeResult result;
    std::string error;
  };
  std::vector<Item> items;
  for (std::size_t c = 0; c < cfg.controllers.size(); ++c) {
    for (auto seed : cfg.seeds) items.push_back({c, seed, {}, {}});
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      try {
        items[i].result = bench::run_episode(cfg, items[i].seed, items[i].controller);
      } catch (const std::exception& e) {
        items[i].error = e.what();
      }
    }
  };
  std::vector<std::thread> threads;
  for (int i = 1; i < std::min<int>(cfg.workers, static_cast<int>(items.size())); ++i) {
    threads.emplace_back(worker);
  }
  worker();
  for (auto& t : threads) t.join();

  std::shared_ptr<const env::TrackSpec> track;
  if (cfg.environment.id == "racing") {
    track = bench::make_environment(cfg.environment, cfg.horizon).track;
  }
  using bench::detail::csv_field;
  using bench::detail::csv_number;
  std::string summary = bench::detail::csv_schema_line("run");
  summary += "controller,variant,seed,status,steps,cumulative_cost,mssd,msgfd,"
             "distance_m,controller_errors,error\n";
  std::string controls = bench::detail::csv_schema_line("controls");
  controls += "controller,seed,step,dim,value\n";
  int failures = 0;
  for (const auto& it : items) {
    const auto& named = cfg.controllers[it.controller];
    const std::string variant(mpc::to_string(named.config.variant));
    if (!it.error.empty()) {
      ++failures;
      summary += csv_field(named.name) + "," + variant + "," + std::to_string(it.seed) +
                 ",failed,0,,,,,0," + csv_field(it.error) + "\n";
      std::cerr << named.name << " seed " << it.seed << ": " << it.error << "\n";
      continue;
    }
    const auto s = metrics::episode_summary(it.result, track.get(), cfg.smoothness);
    summary += csv_field(named.name) + "," + variant + "," + std::to_string(it.seed) +
               "," + (it.result.terminated_early ? "terminated" : "ok") + "," +
               std::to_string(s.steps) + "," + csv_number(s.cumulative_cost) + "," +
               csv_number(s.mssd) + "," + csv_number(s.msgfd) + "," +
               (s.distance ? csv_number(*s.distance) : "") + "," +
               std::to_string(it.result.controller_errors) + "," +
               csv_field(it.result.termination_reason) + "\n";
    const auto& u = it.result.applied_controls;
    for (Eigen::Index t = 0; t < u.rows(); ++t) {
      for (Eigen::Index d = 0; d < u.cols(); ++d) {
        controls += csv_field(named.name) + "," + std::to_string(it.seed) + "," +
                    std::to_string(t) + "," + std::to_string(d) + "," +
                    csv_number(u(t, d)) + "\n";
      }
    }
    std::printf("%-16s seed %-6llu cost %12.4f  mssd %.4g  msgfd %.4g%s\n",
                named.name.c_str(), static_cast<unsigned long long>(it.seed),
                s.cumulative_cost, s.mssd, s.msgfd,
                s.distance ? ("  distance " + csv_number(*s.distance) + " m").c_str()
                           : "");
  }
  write_text(dir / "run.csv", summary);
  write_text(dir / "controls.csv", controls);
  write_text(dir / "config.yaml", bench::dump_config(cfg));
  return failures == 0 ? 0 : 1;
}

int cmd_sweep(const Common& common) {
  const auto cfg = load(common);
  const auto result = bench::run_sweep(cfg);
  bench::write_sweep(result, cfg, cfg.output_dir);
  int failed = 0;
  for (const auto& c : result.cells) {
    std::printf("cell %-3d H=%-4d N=%-5d %-16s ok %d failed %d  mean cost %.4f\n",
                c.cell, c.horizon, c.rollouts, c.controller.c_str(), c.episodes_ok,
                c.episodes_failed, c.mean_cost);
    failed += c.episodes_failed;
  }
  std::printf("wrote %s\n", cfg.output_dir.c_str());
  return failed == 0 ? 0 : 1;
}

struct FitArgs {
  std::string reference;
  std::string family = "lowpass";
  std::string output = ".";
  bench::SpectrumFitGrid grid;
};

int cmd_fit(FitArgs& a) {
  const auto reference = dsp::read_spectrum_csv(a.reference);
  const auto family = sampling::parse_noise_kind(a.family);
  const auto fit = bench::fit_sampler_spectrum(reference, family, a.grid);
  const fs::path dir = a.output;
  fs::create_directories(dir);
  dsp::write_spectrum_csv(fit.reference, dir / "psd_reference.csv");
  dsp::write_spectrum_csv(fit.best, dir / "psd_fit.csv");
  using bench::detail::csv_number;
  std::string table = bench::detail::csv_schema_line("spectrum_fit");
  table += "family,cutoff_hz,order,beta,error\n";
  for (const auto& c : fit.candidates) {
    table += a.family + "," + csv_number(c.spec.fc_hz) + "," + std::to_string(c.spec.order) +
             "," + csv_number(c.spec.beta) + "," + csv_number(c.error) + "\n";
  }
  write_text(dir / "spectrum_fit.csv", table);
  if (fit.resampled) std::printf("reference interpolated onto %d-sample bins\n", a.grid.length);
  switch (family) {
    case sampling::NoiseKind::kLowpass:
      std::printf("best: cutoff %.6g Hz, order %d (L2 %.4g)\n", fit.spec.fc_hz,
                  fit.spec.order, fit.error);
      break;
    case sampling::NoiseKind::kColored:
      std::printf("best: beta %.6g (L2 %.4g)\n", fit.spec.beta, fit.error);
      break;
    case sampling::NoiseKind::kWhite:
      std::printf("white (L2 %.4g)\n", fit.error);
      break;
  }
  return 0;
}

int cmd_timing(const Common& common, const std::string& baseline) {
  auto cfg = load(common);
  std::map<std::string, std::vector<double>> times;
  for (std::size_t c = 0; c < cfg.controllers.size(); ++c) {
    auto& t = times[cfg.controllers[c].name];
    for (auto seed : cfg.seeds) {
      const auto r = bench::run_episode(cfg, seed, c);
      t.insert(t.end(), r.compute_seconds.begin(), r.compute_seconds.end());
    }
  }
  const auto rows = bench::timing_report(times, baseline);
  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);
  using bench::detail::csv_number;
  std::string table = bench::detail::csv_schema_line("timing");
  table += "controller,median_s,overhead_percent\n";
  for (const auto& r : rows) {
    table += bench::detail::csv_field(r.name) + "," + csv_number(r.median_seconds) + "," +
             csv_number(r.overhead_percent) + "\n";
    std::printf("%-16s median %10.3f ms  overhead %+6.1f%%\n", r.name.c_str(),
                1e3 * r.median_seconds, r.overhead_percent);
  }
  write_text(dir / "timing.csv", table);
  return 0;
}

int cmd_plot(const std::string& dir) {
  const auto report = bench::emit_plots(dir);
  for (const auto& p : report.written) std::printf("wrote %s\n", p.string().c_str());
  for (const auto& e : report.errors) std::fprintf(stderr, "skipped %s\n", e.c_str());
  return report.errors.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling-based MPC with low-pass filtered perturbations"};
  app.require_subcommand(1);

  Common run_args, sweep_args, timing_args;
  auto* run = app.add_subcommand("run", "Closed-loop episodes for every controller");
  add_common(run, run_args);
  auto* sweep = app.add_subcommand("sweep", "Horizon x rollout grid of episodes");
  add_common(sweep, sweep_args);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit-spectrum",
                                     "Fit sampler parameters to a reference PSD");
  fit_cmd->add_option("-r,--reference", fit.reference, "freq_hz,power CSV")
      ->required()
      ->check(CLI::ExistingFile);
  fit_cmd->add_option("-f,--family", fit.family, "lowpass | colored | white")
      ->check(CLI::IsMember({"lowpass", "colored", "white"}));
  fit_cmd->add_option("--rate", fit.grid.control_rate_hz, "Control rate (Hz)");
  fit.grid.cutoffs_hz = {0.5, 1, 1.5, 2, 2.5, 3, 4, 5, 6, 8};
  fit.grid.orders = {1, 2, 3, 4, 5, 6};
  fit.grid.betas = {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
  fit_cmd->add_option("--cutoffs", fit.grid.cutoffs_hz, "Candidate cutoffs (Hz)");
  fit_cmd->add_option("--orders", fit.grid.orders, "Candidate filter orders");
  fit_cmd->add_option("--betas", fit.grid.betas, "Candidate colored-noise exponents");
  fit_cmd->add_option("--realizations", fit.grid.realizations, "Sequences averaged");
  fit_cmd->add_option("--length", fit.grid.length, "Samples when resampling");
  fit_cmd->add_option("-s,--seed", fit.grid.seed, "Synthesis seed");
  fit_cmd->add_option("-o,--output", fit.output, "Output directory");

  std::string baseline = "mppi";
  auto* timing = app.add_subcommand("timing", "Median compute time per controller");
  add_common(timing, timing_args);
  timing->add_option("--baseline", baseline, "Controller name used as reference");

  std::string plot_dir;
  auto* plot = app.add_subcommand("plot", "Render SVGs for the CSVs in a directory");
  plot->add_option("dir", plot_dir, "Output directory of run/sweep/fit-spectrum")
      ->required()
      ->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_args);
    if (*sweep) return cmd_sweep(sweep_args);
    if (*fit_cmd) return cmd_fit(fit);
    if (*timing) return cmd_timing(timing_args, baseline);
    if (*plot) return cmd_plot(plot_dir);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
