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
#include <chrono>
#include <cmath>
#include <exception>
#include <stdexcept>

#include "lpmppi/mpc.hpp"

namespace lpmppi::mpc {
namespace {

sampling::SamplerSpec white_like(const sampling::SamplerSpec& spec) {
  sampling::SamplerSpec out = spec;
  out.kind = sampling::NoiseKind::kWhite;
  return out;
}

}  // namespace

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::kMppi: return "mppi";
    case Variant::kLowPass: return "lp_mppi";
    case Variant::kColored: return "colored_mppi";
    case Variant::kSmooth: return "smppi";
    case Variant::kSpline: return "scp_mppi";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::kMppi, Variant::kLowPass, Variant::kColored,
                    Variant::kSmooth, Variant::kSpline}) {
    if (name == to_string(v)) return v;
  }
  throw std::invalid_argument("unknown controller variant: " +
                              std::string(name));
}

sampling::NoiseKind noise_kind(Variant variant) {
  switch (variant) {
    case Variant::kLowPass: return sampling::NoiseKind::kLowpass;
    case Variant::kColored: return sampling::NoiseKind::kColored;
    default: return sampling::NoiseKind::kWhite;
  }
}

ControllerState make_controller(const ControllerConfig& config,
                                const OCPSpec& ocp) {
  ocp.validate();
  ControllerState ctrl;
  ctrl.config = config;
  ctrl.config.sampler.kind = noise_kind(config.variant);
  ctrl.config.sampler.control_rate_hz = 1.0 / ocp.dt;
  if (static_cast<int>(ctrl.config.sampler.sigma.size()) != ocp.control_dim) {
    throw std::invalid_argument("controller: sigma must have control_dim entries");
  }
  ctrl.config.sampler.validate();
  if (!(config.lambda > 0.0)) {
    throw std::invalid_argument("controller: lambda must be positive");
  }
  if (config.rollouts < 1) {
    throw std::invalid_argument("controller: rollouts must be >= 1");
  }
  if (config.variant == Variant::kSmooth && !(config.smoothness_weight >= 0.0)) {
    throw std::invalid_argument("controller: smoothness weight must be >= 0");
  }

  const int h = ocp.horizon;
  const int m = ocp.control_dim;
  ctrl.nominal = clip_controls(ControlSequence::Zero(h, m), ocp.lower, ocp.upper);
  if (config.variant == Variant::kSmooth) {
    ctrl.delta_nominal = ControlSequence::Zero(h, m);
    ctrl.u_prev = ctrl.nominal.row(0).transpose();
  }
  if (config.variant == Variant::kSpline) {
    const int n = config.knots;
    if (n < 2 || n > h) {
      throw std::invalid_argument("controller: need 2 <= knots <= horizon");
    }
    std::vector<double> steps(h), shifted(n);
    for (int t = 0; t < h; ++t) steps[t] = t;
    const double spacing = h > 1 ? static_cast<double>(h - 1) / (n - 1) : 1.0;
    for (int j = 0; j < n; ++j) shifted[j] = std::min(j * spacing + 1.0, h - 1.0);
    ctrl.spline_basis = natural_spline_matrix(n, h, steps);
    ctrl.knot_shift = natural_spline_matrix(n, h, shifted);
    ctrl.knot_values = clip_controls(Matrix::Zero(n, m), ocp.lower, ocp.upper);
  }
  return ctrl;
}

std::vector<ControlSequence> smppi_transform(
    const ControllerState& ctrl, const OCPSpec& ocp,
    const sampling::PerturbationBatch& batch, std::vector<Matrix>* derivatives) {
  if (ctrl.config.variant != Variant::kSmooth) {
    throw std::invalid_argument("smppi_transform: controller is not SMPPI");
  }
  std::vector<ControlSequence> out;
  out.reserve(batch.data.size());
  if (derivatives != nullptr) derivatives->clear();
  const Eigen::Index h = ctrl.delta_nominal.rows();
  const Eigen::Index m = ctrl.delta_nominal.cols();
  for (const Matrix& eps : batch.data) {
    if (eps.rows() != h || eps.cols() != m) {
      throw std::invalid_argument("smppi_transform: batch shape mismatch");
    }
    Matrix delta = ctrl.delta_nominal + eps;
    ControlSequence u(h, m);
    for (Eigen::Index d = 0; d < m; ++d) {
      double prev = ctrl.u_prev[d];
      for (Eigen::Index t = 0; t < h; ++t) {
        prev = std::clamp(prev + delta(t, d) * ocp.dt, ocp.lower[d], ocp.upper[d]);
        u(t, d) = prev;
      }
    }
    out.push_back(std::move(u));
    if (derivatives != nullptr) derivatives->push_back(std::move(delta));
  }
  return out;
}

std::vector<ControlSequence> scp_transform(
    const ControllerState& ctrl, const OCPSpec& ocp,
    const sampling::PerturbationBatch& knot_batch,
    std::vector<Matrix>* knots_out) {
  if (ctrl.config.variant != Variant::kSpline) {
    throw std::invalid_argument("scp_transform: controller is not SCP-MPPI");
  }
  std::vector<ControlSequence> out;
  out.reserve(knot_batch.data.size());
  if (knots_out != nullptr) knots_out->clear();
  for (const Matrix& eps : knot_batch.data) {
    if (eps.rows() != ctrl.knot_values.rows() ||
        eps.cols() != ctrl.knot_values.cols()) {
      throw std::invalid_argument("scp_transform: knot batch shape mismatch");
    }
    Matrix knots = ctrl.knot_values + eps;
    out.push_back(clip_controls(ctrl.spline_basis * knots, ocp.lower, ocp.upper));
    if (knots_out != nullptr) knots_out->push_back(std::move(knots));
  }
  return out;
}

StepResult mppi_step(ControllerState& ctrl, const OCPSpec& ocp,
                     const Vector& state, Rng& rng) {
  const auto start = std::chrono::steady_clock::now();
  const ControllerConfig& cfg = ctrl.config;
  const int n = cfg.rollouts;
  const int h = static_cast<int>(ctrl.nominal.rows());
  StepResult result;
  StepDiagnostics& diag = result.diagnostics;

  try {
    std::vector<ControlSequence> candidates;
    std::vector<Matrix> lifted;  // SMPPI derivatives or SCP knots
    switch (cfg.variant) {
      case Variant::kMppi:
      case Variant::kLowPass:
      case Variant::kColored: {
        const sampling::PerturbationBatch batch =
            sampling::sample(rng, cfg.sampler, n, h);
        candidates.reserve(n);
        for (const Matrix& eps : batch.data) {
          candidates.push_back(
              clip_controls(ctrl.nominal + eps, ocp.lower, ocp.upper));
        }
        break;
      }
      case Variant::kSmooth: {
        const auto batch = sampling::sample_white(rng, white_like(cfg.sampler), n, h);
        candidates = smppi_transform(ctrl, ocp, batch, &lifted);
        break;
      }
      case Variant::kSpline: {
        const auto batch = sampling::sample_white(
            rng, white_like(cfg.sampler), n,
            static_cast<int>(ctrl.knot_values.rows()));
        candidates = scp_transform(ctrl, ocp, batch, &lifted);
        break;
      }
    }

    diag.costs.resize(n);
    diag.failed.resize(n);
    for (int i = 0; i < n; ++i) {
      const RolloutResult r = rollout(ocp, state, candidates[i]);
      double cost = r.cost;
      if (cfg.variant == Variant::kSmooth && !r.failed) {
        cost += cfg.smoothness_weight * lifted[i].squaredNorm();
      }
      diag.costs[i] = cost;
      diag.failed[i] = r.failed ? 1 : 0;
    }
    Weights w = compute_weights(diag.costs, cfg.lambda, diag.failed);
    diag.weights = std::move(w.values);
    diag.degenerate_weights = w.degenerate;

    ctrl.nominal = update_nominal(candidates, diag.weights);
    if (cfg.variant == Variant::kSmooth) {
      ctrl.delta_nominal = update_nominal(lifted, diag.weights);
    } else if (cfg.variant == Variant::kSpline) {
      ctrl.knot_values = update_nominal(lifted, diag.weights);
    }
  } catch (const std::exception& e) {
    diag.error = e.what();
  }

  result.control = ctrl.nominal.row(0).transpose();
  ctrl.nominal = shift_sequence(ctrl.nominal);
  if (cfg.variant == Variant::kSmooth) {
    // Zero derivative in the vacated slot holds the last control.
    ctrl.u_prev = result.control;
    const Eigen::Index rows = ctrl.delta_nominal.rows();
    if (rows > 1) {
      ctrl.delta_nominal.topRows(rows - 1) =
          ctrl.delta_nominal.bottomRows(rows - 1).eval();
    }
    ctrl.delta_nominal.row(rows - 1).setZero();
  } else if (cfg.variant == Variant::kSpline) {
    ctrl.knot_values = (ctrl.knot_shift * ctrl.knot_values).eval();
  }

  diag.compute_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace lpmppi::mpc
