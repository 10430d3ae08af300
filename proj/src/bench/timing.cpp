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

#include <stdexcept>

#include "lpmppi/bench.hpp"

namespace lpmppi::bench {

std::vector<TimingRow> timing_report(
    const std::map<std::string, std::vector<double>>& times,
    const std::string& baseline) {
  const auto base = times.find(baseline);
  if (base == times.end()) {
    throw std::invalid_argument("timing: no entry for baseline '" + baseline + "'");
  }
  for (const auto& [name, t] : times) {
    if (t.empty()) throw std::invalid_argument("timing: no samples for " + name);
  }
  const double base_median = metrics::lower_median(base->second);
  std::vector<TimingRow> rows;
  for (const auto& [name, t] : times) {
    TimingRow row;
    row.name = name;
    row.median_seconds = metrics::lower_median(t);
    row.overhead_percent = 100.0 * (row.median_seconds - base_median) / base_median;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lpmppi::bench
