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

#include "dsp/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace lpmppi::dsp::detail {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

struct AlignedDeleter {
  void operator()(void* p) const { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], AlignedDeleter>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], AlignedDeleter>;

// The FFTW planner is not thread-safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

const PlanPair& plans_for(int n) {
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  RealBuffer r(fftw_alloc_real(static_cast<std::size_t>(n)));
  ComplexBuffer c(fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1)));
  PlanPair p;
  p.forward = fftw_plan_dft_r2c_1d(n, r.get(), c.get(), FFTW_ESTIMATE);
  p.inverse = fftw_plan_dft_c2r_1d(n, c.get(), r.get(), FFTW_ESTIMATE);
  if (p.forward == nullptr || p.inverse == nullptr) {
    throw std::runtime_error("fftw planning failed");
  }
  return cache.emplace(n, p).first->second;
}

}  // namespace

void rfft(std::span<const double> in, std::span<std::complex<double>> out) {
  const int n = static_cast<int>(in.size());
  if (n < 1 || out.size() != in.size() / 2 + 1) {
    throw std::invalid_argument("rfft: bad buffer sizes");
  }
  const PlanPair& plan = plans_for(n);
  RealBuffer r(fftw_alloc_real(in.size()));
  ComplexBuffer c(fftw_alloc_complex(out.size()));
  std::copy(in.begin(), in.end(), r.get());
  fftw_execute_dft_r2c(plan.forward, r.get(), c.get());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = {c[k][0], c[k][1]};
  }
}

void irfft(std::span<const std::complex<double>> in, std::span<double> out) {
  const int n = static_cast<int>(out.size());
  if (n < 1 || in.size() != out.size() / 2 + 1) {
    throw std::invalid_argument("irfft: bad buffer sizes");
  }
  const PlanPair& plan = plans_for(n);
  RealBuffer r(fftw_alloc_real(out.size()));
  ComplexBuffer c(fftw_alloc_complex(in.size()));
  for (std::size_t k = 0; k < in.size(); ++k) {
    c[k][0] = in[k].real();
    c[k][1] = in[k].imag();
  }
  // c2r destroys its input; c is scratch.
  fftw_execute_dft_c2r(plan.inverse, c.get(), r.get());
  const double scale = 1.0 / n;
  for (int i = 0; i < n; ++i) out[i] = r[i] * scale;
}

}  // namespace lpmppi::dsp::detail
