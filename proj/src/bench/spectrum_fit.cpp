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
#include <stdexcept>

#include "lpmppi/bench.hpp"
#include "lpmppi/sampling.hpp"

namespace lpmppi::bench {
namespace {

dsp::Spectrum normalized(dsp::Spectrum s) {
  const double total = s.total_power();
  if (!(total > 0.0)) throw std::invalid_argument("spectrum has no power");
  for (double& p : s.power) p /= total;
  return s;
}

double l2_distance(const dsp::Spectrum& a, const dsp::Spectrum& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.power.size(); ++k) {
    const double d = a.power[k] - b.power[k];
    acc += d * d;
  }
  return std::sqrt(acc * a.bin_width());
}

// True if `s` sits on the rfft bins of some length at `rate`; sets `length`.
bool on_synthesis_bins(const dsp::Spectrum& s, double rate, int& length) {
  const std::size_t bins = s.freqs.size();
  if (bins < 2) return false;
  const double df = s.freqs[1] - s.freqs[0];
  const double ratio = rate / df;
  const long n = std::lround(ratio);
  if (std::abs(ratio - n) > 1e-6 * ratio || n < 4) return false;
  if (static_cast<std::size_t>(n / 2 + 1) != bins) return false;
  for (std::size_t k = 0; k < bins; ++k) {
    if (std::abs(s.freqs[k] - df * k) > 1e-9 * rate) return false;
  }
  length = static_cast<int>(n);
  return true;
}

dsp::Spectrum interpolate(const dsp::Spectrum& ref, const std::vector<double>& freqs) {
  dsp::Spectrum out;
  out.freqs = freqs;
  out.power.resize(freqs.size());
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    const double f = freqs[k];
    if (f <= ref.freqs.front()) {
      out.power[k] = ref.power.front();
    } else if (f >= ref.freqs.back()) {
      out.power[k] = ref.power.back();
    } else {
      const auto it = std::upper_bound(ref.freqs.begin(), ref.freqs.end(), f);
      const std::size_t j = static_cast<std::size_t>(it - ref.freqs.begin());
      const double t = (f - ref.freqs[j - 1]) / (ref.freqs[j] - ref.freqs[j - 1]);
      out.power[k] = (1.0 - t) * ref.power[j - 1] + t * ref.power[j];
    }
  }
  return out;
}

template <typename T>
std::vector<T> sorted(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

dsp::Spectrum sampler_spectrum(const sampling::SamplerSpec& spec, int realizations,
                               int length, std::uint64_t seed) {
  if (realizations < 1 || length < 4) {
    throw std::invalid_argument("sampler_spectrum: need realizations >= 1, length >= 4");
  }
  sampling::SamplerSpec unit = spec;
  unit.sigma = {1.0};
  unit.validate();
  Rng rng(seed);
  const auto batch = sampling::sample(rng, unit, realizations, length);
  Matrix rows(realizations, length);
  for (int i = 0; i < realizations; ++i) rows.row(i) = batch.data[i].col(0).transpose();
  return dsp::periodogram_psd(rows, unit.control_rate_hz, dsp::Window::kHann);
}

SpectrumFit fit_sampler_spectrum(const dsp::Spectrum& reference,
                                 sampling::NoiseKind family,
                                 const SpectrumFitGrid& grid) {
  if (reference.freqs.size() != reference.power.size() || reference.freqs.size() < 2) {
    throw std::invalid_argument("fit: reference spectrum needs at least two bins");
  }
  SpectrumFit fit;
  int length = grid.length;
  if (!on_synthesis_bins(reference, grid.control_rate_hz, length)) {
    length = grid.length;
    fit.resampled = true;
    const double df = grid.control_rate_hz / length;
    std::vector<double> freqs(static_cast<std::size_t>(length / 2 + 1));
    for (std::size_t k = 0; k < freqs.size(); ++k) freqs[k] = df * k;
    fit.reference = normalized(interpolate(reference, freqs));
  } else {
    fit.reference = normalized(reference);
  }

  std::vector<sampling::SamplerSpec> specs;
  sampling::SamplerSpec base;
  base.kind = family;
  base.sigma = {1.0};
  base.control_rate_hz = grid.control_rate_hz;
  switch (family) {
    case sampling::NoiseKind::kWhite:
      specs.push_back(base);
      break;
    case sampling::NoiseKind::kLowpass:
      for (double fc : sorted(grid.cutoffs_hz)) {
        for (int order : sorted(grid.orders)) {
          auto s = base;
          s.fc_hz = fc;
          s.order = order;
          specs.push_back(s);
        }
      }
      break;
    case sampling::NoiseKind::kColored:
      for (double beta : sorted(grid.betas)) {
        auto s = base;
        s.beta = beta;
        specs.push_back(s);
      }
      break;
  }
  if (specs.empty()) throw std::invalid_argument("fit: empty parameter grid");

  bool have_best = false;
  for (const auto& s : specs) {
    auto psd = normalized(sampler_spectrum(s, grid.realizations, length, grid.seed));
    const double err = l2_distance(fit.reference, psd);
    fit.candidates.push_back({s, err});
    if (!have_best || err < fit.error) {
      have_best = true;
      fit.error = err;
      fit.spec = s;
      fit.best = std::move(psd);
    }
  }
  return fit;
}

}  // namespace lpmppi::bench
