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
#include <string>
#include <string_view>
#include <vector>

#include "lpmppi/rng.hpp"
#include "lpmppi/types.hpp"

namespace lpmppi::sampling {

enum class NoiseKind { kWhite, kColored, kLowpass };

std::string_view to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view name);

/// Perturbation distribution. `sigma` is the per-dimension standard deviation
/// (a diagonal covariance) in control units.
struct SamplerSpec {
  NoiseKind kind = NoiseKind::kWhite;
  std::vector<double> sigma;
  double beta = 1.0;             // colored only
  double fc_hz = 1.0;            // lowpass only
  int order = 2;                 // lowpass only
  double control_rate_hz = 1.0;  // 1 / dt

  /// Cutoff as a fraction of the Nyquist rate.
  double fc_norm() const { return fc_hz / (control_rate_hz / 2.0); }

  /// Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

/// N perturbation sequences of shape H x m.
struct PerturbationBatch {
  std::vector<Matrix> data;
  SamplerSpec spec;
  std::uint64_t seed = 0;

  int rollouts() const { return static_cast<int>(data.size()); }
  int horizon() const { return data.empty() ? 0 : static_cast<int>(data[0].rows()); }
  int dims() const { return data.empty() ? 0 : static_cast<int>(data[0].cols()); }
};

// Every sampler draws one 64-bit batch seed from `rng`; rollout i then uses
// the independent stream derive_seed(seed, {i}), drawing dimension by
// dimension. The batch is therefore a pure function of (seed, spec, N, H).

PerturbationBatch sample_white(Rng& rng, const SamplerSpec& spec, int rollouts,
                               int horizon);

/// White sequences of length H, Butterworth-filtered per rollout and
/// dimension from a filter state drawn from its stationary distribution (so
/// there is no start-up transient), then rescaled so each dimension's batch
/// standard deviation equals sigma.
PerturbationBatch sample_lowpass(Rng& rng, const SamplerSpec& spec,
                                 int rollouts, int horizon);

/// f^-beta sequences per rollout and dimension, rescaled like sample_lowpass.
/// beta = 0 returns exactly the batch sample_white would draw.
PerturbationBatch sample_colored(Rng& rng, const SamplerSpec& spec,
                                 int rollouts, int horizon);

/// Dispatches on spec.kind.
PerturbationBatch sample(Rng& rng, const SamplerSpec& spec, int rollouts,
                         int horizon);

}  // namespace lpmppi::sampling
