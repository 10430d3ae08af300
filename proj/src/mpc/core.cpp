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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lpmppi/mpc.hpp"

namespace lpmppi::mpc {

void OCPSpec::validate() const {
  if (state_dim < 1 || control_dim < 1) {
    throw std::invalid_argument("ocp: dimensions must be >= 1");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("ocp: dt must be positive");
  if (horizon < 1) throw std::invalid_argument("ocp: horizon must be >= 1");
  if (!dynamics || !step_cost || !terminal_cost) {
    throw std::invalid_argument("ocp: dynamics and costs must be set");
  }
  if (lower.size() != control_dim || upper.size() != control_dim) {
    throw std::invalid_argument("ocp: bounds must have control_dim entries");
  }
  for (int i = 0; i < control_dim; ++i) {
    if (!(lower[i] < upper[i])) {
      throw std::invalid_argument("ocp: lower bound must be below upper bound");
    }
  }
}

RolloutResult rollout(const OCPSpec& ocp, const Vector& x0,
                      const ControlSequence& controls) {
  if (x0.size() != ocp.state_dim || controls.cols() != ocp.control_dim) {
    throw std::invalid_argument("rollout: dimension mismatch");
  }
  const int horizon = static_cast<int>(controls.rows());
  RolloutResult out;
  out.controls = clip_controls(controls, ocp.lower, ocp.upper);
  out.states.resize(horizon + 1, ocp.state_dim);
  out.states.row(0) = x0.transpose();

  const auto n = static_cast<std::size_t>(ocp.state_dim);
  const auto m = static_cast<std::size_t>(ocp.control_dim);
  double cost = 0.0;
  for (int h = 0; h < horizon; ++h) {
    std::span<const double> x(out.states.row(h).data(), n);
    std::span<const double> u(out.controls.row(h).data(), m);
    std::span<double> next(out.states.row(h + 1).data(), n);
    cost += ocp.step_cost(x, u);
    ocp.dynamics(x, u, next);
    const bool finite =
        std::isfinite(cost) &&
        std::all_of(next.begin(), next.end(),
                    [](double v) { return std::isfinite(v); });
    if (!finite) {
      out.failed = true;
      out.states.conservativeResize(h + 1, Eigen::NoChange);
      const double partial = std::isfinite(cost) ? std::abs(cost) : 0.0;
      out.cost = kFailedCostScale * (1.0 + partial);
      return out;
    }
  }
  cost += ocp.terminal_cost(
      std::span<const double>(out.states.row(horizon).data(), n));
  if (!std::isfinite(cost)) {
    out.failed = true;
    out.cost = kFailedCostScale;
    return out;
  }
  out.cost = cost;
  return out;
}

Weights compute_weights(std::span<const double> costs, double lambda,
                        std::span<const std::uint8_t> failed) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("compute_weights: lambda must be positive");
  }
  if (costs.empty()) throw std::invalid_argument("compute_weights: no costs");
  if (!failed.empty() && failed.size() != costs.size()) {
    throw std::invalid_argument("compute_weights: failed mask length mismatch");
  }
  const std::size_t n = costs.size();
  Weights w;
  w.values.assign(n, 0.0);

  const auto usable = [&](std::size_t i) {
    return std::isfinite(costs[i]) && (failed.empty() || failed[i] == 0);
  };
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (usable(i)) best = std::min(best, costs[i]);
  }
  if (!std::isfinite(best)) {
    w.degenerate = true;
    std::fill(w.values.begin(), w.values.end(), 1.0 / n);
    return w;
  }
  // Failed rollouts still compete through their sentinel cost.
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::isfinite(costs[i]) ? costs[i] : best + 1e300;
    w.values[i] = std::exp(-lambda * (c - best));
    total += w.values[i];
  }
  for (double& v : w.values) v /= total;
  return w;
}

ControlSequence update_nominal(std::span<const ControlSequence> sequences,
                               std::span<const double> weights) {
  if (sequences.empty() || sequences.size() != weights.size()) {
    throw std::invalid_argument("update_nominal: size mismatch");
  }
  ControlSequence out =
      ControlSequence::Zero(sequences[0].rows(), sequences[0].cols());
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    if (weights[i] != 0.0) out += weights[i] * sequences[i];
  }
  return out;
}

ControlSequence clip_controls(const ControlSequence& controls,
                              const Vector& lower, const Vector& upper) {
  ControlSequence out(controls.rows(), controls.cols());
  for (Eigen::Index t = 0; t < controls.rows(); ++t) {
    for (Eigen::Index d = 0; d < controls.cols(); ++d) {
      out(t, d) = std::clamp(controls(t, d), lower[d], upper[d]);
    }
  }
  return out;
}

ControlSequence shift_sequence(const ControlSequence& controls) {
  const Eigen::Index h = controls.rows();
  if (h <= 1) return controls;
  ControlSequence out(h, controls.cols());
  out.topRows(h - 1) = controls.bottomRows(h - 1);
  out.row(h - 1) = controls.row(h - 1);
  return out;
}

}  // namespace lpmppi::mpc
