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

#include <complex>
#include <span>

namespace lpmppi::dsp::detail {

// Real-input DFT of length n = in.size(); out has n/2 + 1 bins. Unnormalized.
void rfft(std::span<const double> in, std::span<std::complex<double>> out);

// Inverse of rfft scaled by 1/n, so irfft(rfft(x)) == x.
void irfft(std::span<const std::complex<double>> in, std::span<double> out);

}  // namespace lpmppi::dsp::detail
