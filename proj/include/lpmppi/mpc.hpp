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
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpmppi/rng.hpp"
#include "lpmppi/sampling.hpp"
#include "lpmppi/types.hpp"

namespace lpmppi::mpc {

/// x_next = f(x, u). Must be deterministic.
using Dynamics = std::function<void(std::span<const double> x,
                                    std::span<const double> u,
                                    std::span<double> x_next)>;
using StepCost =
    std::function<double(std::span<const double> x, std::span<const double> u)>;
using TerminalCost = std::function<double(std::span<const double> x)>;

/// Finite-horizon optimal control problem
///   min  sum_h c(x_h, u_h) + c_f(x_H)   s.t.  x_{h+1} = f(x_h, u_h), u in box.
/// State constraints are expressed as cost penalties.
struct OCPSpec {
  int state_dim = 0;
  int control_dim = 0;
  double dt = 0.0;
  int horizon = 0;
  Dynamics dynamics;
  StepCost step_cost;
  TerminalCost terminal_cost;
  Vector lower;
  Vector upper;

  void validate() const;
};

/// Cost assigned to a rollout whose state went nonfinite is
/// kFailedCostScale * (1 + |cost accumulated before the failure|).
inline constexpr double kFailedCostScale = 1e6;

struct RolloutResult {
  Matrix states;             // (H+1) x n, truncated after a failure
  ControlSequence controls;  // H x m, clipped
  double cost = 0.0;
  bool failed = false;
};

/// Clips `controls` to the OCP box and simulates from `x0`.
RolloutResult rollout(const OCPSpec& ocp, const Vector& x0,
                      const ControlSequence& controls);

struct Weights {
  std::vector<double> values;
  bool degenerate = false;  // every rollout failed; weights are uniform
};

/// w_i = exp(-lambda (J_i - min J)) / sum_j exp(-lambda (J_j - min J)).
/// `failed` (optional, same length as costs) marks sentinel costs.
Weights compute_weights(std::span<const double> costs, double lambda,
                        std::span<const std::uint8_t> failed = {});

/// sum_i w_i U_i.
ControlSequence update_nominal(std::span<const ControlSequence> sequences,
                               std::span<const double> weights);

ControlSequence clip_controls(const ControlSequence& controls,
                              const Vector& lower, const Vector& upper);

/// Drops the first step and repeats the last one.
ControlSequence shift_sequence(const ControlSequence& controls);

enum class Variant { kMppi, kLowPass, kColored, kSmooth, kSpline };

std::string_view to_string(Variant variant);
Variant parse_variant(std::string_view name);
/// Noise family the variant samples from.
sampling::NoiseKind noise_kind(Variant variant);

struct ControllerConfig {
  Variant variant = Variant::kMppi;
  /// sigma, cutoff, order, beta. `kind` and `control_rate_hz` are filled in
  /// from the variant and the OCP by make_controller().
  sampling::SamplerSpec sampler;
  double lambda = 1.0;
  int rollouts = 64;
  double smoothness_weight = 0.1;  // SMPPI
  int knots = 8;                   // SCP-MPPI
};

struct ControllerState {
  ControllerConfig config;
  ControlSequence nominal;  // H x m, always inside the box

  // SMPPI: derivative-space nominal and the last applied control.
  ControlSequence delta_nominal;
  Vector u_prev;

  // SCP-MPPI: knot-space nominal, knot -> horizon interpolation (H x n_cp)
  // and the one-step knot shift (n_cp x n_cp).
  Matrix knot_values;
  Matrix spline_basis;
  Matrix knot_shift;
};

/// Validates the configuration against `ocp` and returns a zero-initialized
/// (clipped) controller. Throws std::invalid_argument.
ControllerState make_controller(const ControllerConfig& config,
                                const OCPSpec& ocp);

struct StepDiagnostics {
  std::vector<double> costs;
  std::vector<double> weights;
  std::vector<std::uint8_t> failed;
  bool degenerate_weights = false;
  double compute_seconds = 0.0;
  std::string error;  // nonempty if the step fell back to the previous plan
};

struct StepResult {
  Vector control;
  StepDiagnostics diagnostics;
};

/// One control tick: sample, transform, clip, roll out, weight, update, apply
/// the first input, shift. Never throws on sampler or rollout failures; the
/// previous plan is applied and the error is reported in the diagnostics.
StepResult mppi_step(ControllerState& ctrl, const OCPSpec& ocp,
                     const Vector& state, Rng& rng);

/// Candidate sequences for SMPPI: the perturbed derivatives
/// delta_nominal + eps_i integrated from u_prev with clipping inside the
/// recursion. `derivatives`, when given, receives delta_nominal + eps_i.
std::vector<ControlSequence> smppi_transform(
    const ControllerState& ctrl, const OCPSpec& ocp,
    const sampling::PerturbationBatch& batch,
    std::vector<Matrix>* derivatives = nullptr);

/// Candidate sequences for SCP-MPPI from an N x n_cp x m knot perturbation
/// batch: knots interpolated by a natural cubic spline, then clipped.
/// `knots_out`, when given, receives knot_values + eps_i.
std::vector<ControlSequence> scp_transform(
    const ControllerState& ctrl, const OCPSpec& ocp,
    const sampling::PerturbationBatch& knot_batch,
    std::vector<Matrix>* knots_out = nullptr);

/// Rows evaluate the natural cubic spline through `knots` values placed
/// uniformly on [0, horizon - 1] at each of `positions`.
Matrix natural_spline_matrix(int knots, int horizon,
                             std::span<const double> positions);

}  // namespace lpmppi::mpc
