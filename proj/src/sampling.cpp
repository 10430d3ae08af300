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

#include "lpmppi/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lpmppi/dsp.hpp"

namespace lpmppi::sampling {
namespace {

void check_kind(const SamplerSpec& spec, NoiseKind expected) {
  if (spec.kind != expected) {
    throw std::invalid_argument("sampler kind mismatch: expected " +
                                std::string(to_string(expected)) + ", got " +
                                std::string(to_string(spec.kind)));
  }
  spec.validate();
}

void check_shape(int rollouts, int horizon) {
  if (rollouts < 1 || horizon < 1) {
    throw std::invalid_argument("sampler: rollouts and horizon must be >= 1");
  }
}

// Rescales dimension d of the whole batch to standard deviation sigma[d].
void renormalize(PerturbationBatch& batch) {
  const int dims = batch.dims();
  for (int d = 0; d < dims; ++d) {
    double sum = 0.0, sum_sq = 0.0;
    std::size_t count = 0;
    for (const Matrix& m : batch.data) {
      for (Eigen::Index t = 0; t < m.rows(); ++t) {
        sum += m(t, d);
        sum_sq += m(t, d) * m(t, d);
        ++count;
      }
    }
    const double mean = sum / count;
    const double var = std::max(0.0, sum_sq / count - mean * mean);
    const double scale =
        var > 0.0 ? batch.spec.sigma[d] / std::sqrt(var) : batch.spec.sigma[d];
    for (Matrix& m : batch.data) m.col(d) *= scale;
  }
}

PerturbationBatch empty_batch(Rng& rng, const SamplerSpec& spec, int rollouts) {
  PerturbationBatch batch;
  batch.spec = spec;
  batch.seed = rng.next_u64();
  batch.data.reserve(rollouts);
  return batch;
}

}  // namespace

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kWhite: return "white";
    case NoiseKind::kColored: return "colored";
    case NoiseKind::kLowpass: return "lowpass";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(std::string_view name) {
  if (name == "white") return NoiseKind::kWhite;
  if (name == "colored") return NoiseKind::kColored;
  if (name == "lowpass") return NoiseKind::kLowpass;
  throw std::invalid_argument("unknown noise kind: " + std::string(name));
}

void SamplerSpec::validate() const {
  if (sigma.empty()) throw std::invalid_argument("sampler: sigma is empty");
  for (double s : sigma) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("sampler: sigma must be positive");
    }
  }
  if (!(control_rate_hz > 0.0)) {
    throw std::invalid_argument("sampler: control rate must be positive");
  }
  if (kind == NoiseKind::kLowpass) {
    if (!(fc_hz > 0.0 && fc_hz < control_rate_hz / 2.0)) {
      throw std::invalid_argument(
          "sampler: cutoff must lie strictly between 0 and Nyquist");
    }
    if (order < 1) throw std::invalid_argument("sampler: order must be >= 1");
  }
  if (kind == NoiseKind::kColored && !(beta >= 0.0)) {
    throw std::invalid_argument("sampler: beta must be >= 0");
  }
}

namespace {

PerturbationBatch white_batch(Rng& rng, const SamplerSpec& spec, int rollouts,
                              int horizon) {
  PerturbationBatch batch = empty_batch(rng, spec, rollouts);
  const int dims = static_cast<int>(spec.sigma.size());
  for (int i = 0; i < rollouts; ++i) {
    Rng stream(derive_seed(batch.seed, {static_cast<std::uint64_t>(i)}));
    Matrix eps(horizon, dims);
    for (int d = 0; d < dims; ++d) {
      for (int t = 0; t < horizon; ++t) eps(t, d) = spec.sigma[d] * stream.normal();
    }
    batch.data.push_back(std::move(eps));
  }
  return batch;
}

}  // namespace

PerturbationBatch sample_white(Rng& rng, const SamplerSpec& spec, int rollouts,
                               int horizon) {
  check_kind(spec, NoiseKind::kWhite);
  check_shape(rollouts, horizon);
  return white_batch(rng, spec, rollouts, horizon);
}

namespace {

struct LowpassDesign {
  double fc_norm = -1.0;
  int order = 0;
  dsp::BiquadCascade cascade;
  Matrix state_factor;
};

// The design depends only on (fc_norm, order), which rarely changes between
// consecutive calls on one thread.
const LowpassDesign& lowpass_design(double fc_norm, int order) {
  thread_local LowpassDesign cached;
  if (cached.fc_norm != fc_norm || cached.order != order) {
    cached.cascade = dsp::design_butterworth_lowpass(fc_norm, order);
    cached.state_factor = dsp::stationary_state_factor(cached.cascade);
    cached.fc_norm = fc_norm;
    cached.order = order;
  }
  return cached;
}

}  // namespace

PerturbationBatch sample_lowpass(Rng& rng, const SamplerSpec& spec,
                                 int rollouts, int horizon) {
  check_kind(spec, NoiseKind::kLowpass);
  check_shape(rollouts, horizon);
  PerturbationBatch batch = empty_batch(rng, spec, rollouts);
  const LowpassDesign& design = lowpass_design(spec.fc_norm(), spec.order);
  const int dims = static_cast<int>(spec.sigma.size());

  dsp::CascadeFilter filter(design.cascade);
  const int n = filter.state_size();
  Vector z(n), state(n);
  for (int i = 0; i < rollouts; ++i) {
    Rng stream(derive_seed(batch.seed, {static_cast<std::uint64_t>(i)}));
    Matrix eps(horizon, dims);
    for (int d = 0; d < dims; ++d) {
      for (int k = 0; k < n; ++k) z[k] = stream.normal();
      state.noalias() = design.state_factor * z;
      filter.set_state(state);
      for (int t = 0; t < horizon; ++t) eps(t, d) = filter.step(stream.normal());
    }
    batch.data.push_back(std::move(eps));
  }
  renormalize(batch);
  return batch;
}

PerturbationBatch sample_colored(Rng& rng, const SamplerSpec& spec,
                                 int rollouts, int horizon) {
  check_kind(spec, NoiseKind::kColored);
  check_shape(rollouts, horizon);
  // Flat spectral shaping is the identity: reuse the white draws unchanged.
  if (spec.beta == 0.0) return white_batch(rng, spec, rollouts, horizon);
  PerturbationBatch batch = empty_batch(rng, spec, rollouts);
  const int dims = static_cast<int>(spec.sigma.size());
  for (int i = 0; i < rollouts; ++i) {
    Rng stream(derive_seed(batch.seed, {static_cast<std::uint64_t>(i)}));
    Matrix eps = dsp::generate_colored_noise(stream, spec.beta, horizon, dims);
    for (int d = 0; d < dims; ++d) eps.col(d) *= spec.sigma[d];
    batch.data.push_back(std::move(eps));
  }
  renormalize(batch);
  return batch;
}

PerturbationBatch sample(Rng& rng, const SamplerSpec& spec, int rollouts,
                         int horizon) {
  switch (spec.kind) {
    case NoiseKind::kWhite: return sample_white(rng, spec, rollouts, horizon);
    case NoiseKind::kColored: return sample_colored(rng, spec, rollouts, horizon);
    case NoiseKind::kLowpass: return sample_lowpass(rng, spec, rollouts, horizon);
  }
  throw std::invalid_argument("sampler: unknown kind");
}

}  // namespace lpmppi::sampling
