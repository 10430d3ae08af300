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
#include <filesystem>
#include <span>
#include <vector>

#include "lpmppi/rng.hpp"
#include "lpmppi/types.hpp"

namespace lpmppi::dsp {

/// One second-order section, a0 normalized to 1:
///   H(z) = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2)
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;

  std::complex<double> response(std::complex<double> z) const;
};

/// Digital low-pass realized as cascaded second-order sections.
///
/// `fc_norm` is the -3 dB cutoff as a fraction of Nyquist. Odd orders carry
/// one first-order section (b2 = a2 = 0). Each section is scaled to unit DC
/// gain, so `gain` is the remaining overall factor and is 1 for every design
/// produced by design_butterworth_lowpass().
struct BiquadCascade {
  std::vector<Biquad> sections;
  double gain = 1.0;
  double fc_norm = 0.0;
  int order = 0;

  /// Roots of every section denominator.
  std::vector<std::complex<double>> poles() const;
  bool is_stable() const;
};

/// Butterworth low-pass of the given order with its -3 dB point at `fc_norm`,
/// via the bilinear transform with the analog cutoff prewarped to
/// tan(pi * fc_norm / 2). Throws std::domain_error unless 0 < fc_norm < 1 and
/// order >= 1.
BiquadCascade design_butterworth_lowpass(double fc_norm, int order);

/// |H(exp(j*pi*f_norm))| for f_norm in [0, 1].
double magnitude_response(const BiquadCascade& cascade, double f_norm);

/// Running transposed direct-form II state of a cascade.
class CascadeFilter {
 public:
  explicit CascadeFilter(const BiquadCascade& cascade);

  double step(double x);
  void reset();

  /// Filters `signal` in place, continuing from the current state.
  void process(std::span<double> signal);

  /// Section states laid out as (s1, s2) per section.
  int state_size() const { return 2 * static_cast<int>(sections_.size()); }
  void set_state(std::span<const double> state);
  void get_state(std::span<double> state) const;
  void set_state(const Vector& state) {
    set_state(std::span<const double>(state.data(), state.size()));
  }
  void get_state(Vector& state) const {
    get_state(std::span<double>(state.data(), state.size()));
  }

 private:
  std::vector<Biquad> sections_;
  double gain_;
  std::vector<double> s1_, s2_;
};

/// Square root S (state_size x state_size) of the stationary state covariance
/// of `cascade` driven by unit-variance white noise: S z with z ~ N(0, I) is a
/// draw of the filter state after an infinitely long run-in.
Matrix stationary_state_factor(const BiquadCascade& cascade);

/// Causal, column-independent filtering from zero section state.
///
/// `burn_in` rows, when given, are fed through the filter first and their
/// outputs discarded; the result always has the shape of `sequence`. Throws
/// std::invalid_argument when the column counts differ.
Matrix apply_filter(const BiquadCascade& cascade, const Matrix& sequence,
                    const Matrix& burn_in = Matrix());

/// Savitzky-Golay smoothing along each column. Interior samples use the
/// centered window; near the ends the window is truncated to the available
/// samples and the fit is evaluated at the sample itself. The degree is capped
/// at span - 1 when a truncated window is too short for `polyorder`.
Matrix savitzky_golay_smooth(const Matrix& sequence, int window, int polyorder);

/// Least-squares weights that evaluate the degree-`polyorder` fit over a
/// `window`-sample block at block position `eval_index`.
std::vector<double> savitzky_golay_weights(int window, int polyorder,
                                           int eval_index);

/// T x m matrix whose columns have expected PSD proportional to f^-beta,
/// each renormalized to unit sample variance. Columns are drawn in order from
/// `rng`.
Matrix generate_colored_noise(Rng& rng, double beta, int length, int dims);

/// In-place spectral shaping of one white sequence by f^(-beta/2); the DC bin
/// takes the gain of the first nonzero bin. Does not renormalize.
void shape_power_law(std::span<double> sequence, double beta);

enum class Window { kRectangular, kHann };

/// One-sided power spectral density.
struct Spectrum {
  std::vector<double> freqs;  // Hz
  std::vector<double> power;  // units^2 / Hz

  double bin_width() const;
  double total_power() const;  // sum(power) * bin_width
};

/// Averaged one-sided periodogram over the rows of `batch` (R x T), scaled so
/// that the integral of the PSD equals the mean-square of the signal.
Spectrum periodogram_psd(const Matrix& batch, double sample_rate,
                         Window window = Window::kRectangular);

/// Two-column CSV (`freq_hz,power`) after a schema comment line.
void write_spectrum_csv(const Spectrum& spectrum,
                        const std::filesystem::path& path);
Spectrum read_spectrum_csv(const std::filesystem::path& path);

}  // namespace lpmppi::dsp
