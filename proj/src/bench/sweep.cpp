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

#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "bench/csv.hpp"
#include "lpmppi/bench.hpp"

namespace lpmppi::bench {
namespace {

using detail::csv_field;
using detail::csv_number;

struct Job {
  int cell;
  std::size_t controller;
  std::uint64_t seed;
};

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

}  // namespace

std::vector<Improvement> improvement_table(const std::vector<SweepCell>& cells) {
  std::vector<Improvement> out;
  for (const auto& lp : cells) {
    if (lp.variant != "lp_mppi") continue;
    // Only the first lp_mppi controller of each (H, N) is the reference.
    bool first = true;
    for (const auto& other : cells) {
      if (&other == &lp) break;
      if (other.variant == "lp_mppi" && other.horizon == lp.horizon &&
          other.rollouts == lp.rollouts) {
        first = false;
      }
    }
    if (!first) continue;
    for (const auto& base : cells) {
      if (&base == &lp || base.horizon != lp.horizon ||
          base.rollouts != lp.rollouts) {
        continue;
      }
      Improvement imp;
      imp.horizon = lp.horizon;
      imp.rollouts = lp.rollouts;
      imp.baseline = base.controller;
      imp.improvement = (base.mean_cost - lp.mean_cost) / std::abs(base.mean_cost);
      out.push_back(imp);
    }
  }
  return out;
}

SweepResult run_sweep(const BenchConfig& config) {
  config.validate();
  const std::vector<int> horizons =
      config.sweep ? config.sweep->horizons : std::vector<int>{config.horizon};
  std::vector<int> rollout_axis;
  if (config.sweep) rollout_axis = config.sweep->rollouts;

  // Cells enumerate H (outer), N, then controller.
  SweepResult result;
  std::vector<BenchConfig> cell_configs;
  const std::size_t n_rollout_values =
      rollout_axis.empty() ? 1 : rollout_axis.size();
  for (int h : horizons) {
    for (std::size_t r = 0; r < n_rollout_values; ++r) {
      for (std::size_t c = 0; c < config.controllers.size(); ++c) {
        BenchConfig cc = config;
        cc.horizon = h;
        if (!rollout_axis.empty()) cc.controllers[c].config.rollouts = rollout_axis[r];
        SweepCell cell;
        cell.cell = static_cast<int>(result.cells.size());
        cell.horizon = h;
        cell.rollouts = cc.controllers[c].config.rollouts;
        cell.controller = cc.controllers[c].name;
        cell.variant = std::string(mpc::to_string(cc.controllers[c].config.variant));
        result.cells.push_back(cell);
        cell_configs.push_back(std::move(cc));
      }
    }
  }

  std::vector<Job> jobs;
  for (const auto& cell : result.cells) {
    const std::size_t c = static_cast<std::size_t>(cell.cell) % config.controllers.size();
    for (auto seed : config.seeds) jobs.push_back({cell.cell, c, seed});
  }
  result.episodes.resize(jobs.size());

  std::shared_ptr<const env::TrackSpec> track;
  if (config.environment.id == "racing") {
    track = make_environment(config.environment, config.horizon).track;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const Job& job = jobs[j];
      const SweepCell& cell = result.cells[static_cast<std::size_t>(job.cell)];
      SweepEpisode ep;
      ep.cell = cell.cell;
      ep.horizon = cell.horizon;
      ep.rollouts = cell.rollouts;
      ep.controller = cell.controller;
      ep.variant = cell.variant;
      ep.seed = job.seed;
      try {
        const auto& cc = cell_configs[static_cast<std::size_t>(job.cell)];
        const auto r = run_episode(cc, job.seed, job.controller);
        ep.summary = metrics::episode_summary(r, track.get(), cc.smoothness);
        ep.ok = !r.terminated_early;
        ep.error = r.termination_reason;
      } catch (const std::exception& e) {
        ep.ok = false;
        ep.error = e.what();
      }
      result.episodes[j] = std::move(ep);
    }
  };
  const int n_threads = std::max(1, std::min<int>(config.workers,
                                                  static_cast<int>(jobs.size())));
  std::vector<std::thread> threads;
  for (int i = 1; i < n_threads; ++i) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  for (auto& cell : result.cells) {
    std::vector<double> cost, mssd, msgfd, dist;
    for (const auto& ep : result.episodes) {
      if (ep.cell != cell.cell) continue;
      if (!ep.ok) {
        ++cell.episodes_failed;
        continue;
      }
      ++cell.episodes_ok;
      cost.push_back(ep.summary.cumulative_cost);
      mssd.push_back(ep.summary.mssd);
      msgfd.push_back(ep.summary.msgfd);
      if (ep.summary.distance) dist.push_back(*ep.summary.distance);
    }
    cell.mean_cost = mean_of(cost);
    cell.mean_mssd = mean_of(mssd);
    cell.mean_msgfd = mean_of(msgfd);
    if (!dist.empty()) cell.median_distance = metrics::lower_median(dist);
  }
  result.improvements = improvement_table(result.cells);
  return result;
}

void write_sweep(const SweepResult& result, const BenchConfig& config,
                 const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  std::string episodes = detail::csv_schema_line("episodes");
  episodes +=
      "cell,horizon,rollouts,controller,variant,seed,status,steps,"
      "cumulative_cost,mssd,msgfd,distance_m,error\n";
  for (const auto& ep : result.episodes) {
    const auto& s = ep.summary;
    episodes += std::to_string(ep.cell) + "," + std::to_string(ep.horizon) + "," +
                std::to_string(ep.rollouts) + "," + csv_field(ep.controller) + "," +
                ep.variant + "," + std::to_string(ep.seed) + "," +
                (ep.ok ? "ok" : "failed") + "," + std::to_string(s.steps) + "," +
                csv_number(s.cumulative_cost) + "," + csv_number(s.mssd) + "," +
                csv_number(s.msgfd) + "," +
                (s.distance ? csv_number(*s.distance) : std::string()) + "," +
                csv_field(ep.error) + "\n";
  }

  std::string aggregate = detail::csv_schema_line("aggregate");
  aggregate +=
      "cell,horizon,rollouts,controller,variant,episodes_ok,episodes_failed,"
      "mean_cost,mean_mssd,mean_msgfd,median_distance_m\n";
  for (const auto& c : result.cells) {
    aggregate += std::to_string(c.cell) + "," + std::to_string(c.horizon) + "," +
                 std::to_string(c.rollouts) + "," + csv_field(c.controller) + "," +
                 c.variant + "," + std::to_string(c.episodes_ok) + "," +
                 std::to_string(c.episodes_failed) + "," + csv_number(c.mean_cost) +
                 "," + csv_number(c.mean_mssd) + "," + csv_number(c.mean_msgfd) +
                 "," + (c.median_distance ? csv_number(*c.median_distance) : "") +
                 "\n";
  }

  std::string improvement = detail::csv_schema_line("improvement");
  improvement += "horizon,rollouts,baseline,improvement\n";
  for (const auto& i : result.improvements) {
    improvement += std::to_string(i.horizon) + "," + std::to_string(i.rollouts) +
                   "," + csv_field(i.baseline) + "," + csv_number(i.improvement) +
                   "\n";
  }

  write_file(dir / "episodes.csv", episodes);
  write_file(dir / "aggregate.csv", aggregate);
  write_file(dir / "improvement.csv", improvement);
  write_file(dir / "config.yaml", dump_config(config));
}

}  // namespace lpmppi::bench
