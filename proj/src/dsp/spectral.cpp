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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dsp/fft.hpp"
#include "lpmppi/dsp.hpp"

namespace lpmppi::dsp {

void shape_power_law(std::span<double> sequence, double beta) {
  if (beta < 0.0) throw std::domain_error("colored noise: beta must be >= 0");
  const std::size_t n = sequence.size();
  if (beta == 0.0 || n < 2) return;
  std::vector<std::complex<double>> bins(n / 2 + 1);
  detail::rfft(sequence, bins);
  const double dn = static_cast<double>(n);
  bins[0] *= std::pow(1.0 / dn, -beta / 2.0);
  for (std::size_t k = 1; k < bins.size(); ++k) {
    bins[k] *= std::pow(static_cast<double>(k) / dn, -beta / 2.0);
  }
  detail::irfft(bins, sequence);
}

Matrix generate_colored_noise(Rng& rng, double beta, int length, int dims) {
  if (beta < 0.0) throw std::domain_error("colored noise: beta must be >= 0");
  if (length < 1 || dims < 1) {
    throw std::invalid_argument("colored noise: length and dims must be >= 1");
  }
  Matrix out(length, dims);
  std::vector<double> column(length);
  for (int d = 0; d < dims; ++d) {
    for (double& v : column) v = rng.normal();
    shape_power_law(column, beta);
    double mean = 0.0;
    for (double v : column) mean += v;
    mean /= length;
    double var = 0.0;
    for (double v : column) var += (v - mean) * (v - mean);
    var /= length;
    const double scale = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
    for (int t = 0; t < length; ++t) out(t, d) = column[t] * scale;
  }
  return out;
}

double Spectrum::bin_width() const {
  return freqs.size() >= 2 ? freqs[1] - freqs[0] : 0.0;
}

double Spectrum::total_power() const {
  double sum = 0.0;
  for (double p : power) sum += p;
  return sum * bin_width();
}

Spectrum periodogram_psd(const Matrix& batch, double sample_rate,
                         Window window) {
  const Eigen::Index realizations = batch.rows();
  const Eigen::Index n = batch.cols();
  if (realizations < 1 || n < 2) {
    throw std::invalid_argument("periodogram: need R >= 1 and T >= 2");
  }
  if (!(sample_rate > 0.0)) {
    throw std::invalid_argument("periodogram: sample_rate must be positive");
  }

  std::vector<double> taper(n, 1.0);
  if (window == Window::kHann) {
    for (Eigen::Index i = 0; i < n; ++i) {
      taper[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
    }
  }
  double taper_energy = 0.0;
  for (double w : taper) taper_energy += w * w;

  const std::size_t bins = static_cast<std::size_t>(n / 2 + 1);
  Spectrum out;
  out.freqs.resize(bins);
  out.power.assign(bins, 0.0);
  for (std::size_t k = 0; k < bins; ++k) {
    out.freqs[k] = sample_rate * static_cast<double>(k) / n;
  }

  std::vector<double> row(n);
  std::vector<std::complex<double>> spec(bins);
  for (Eigen::Index r = 0; r < realizations; ++r) {
    for (Eigen::Index i = 0; i < n; ++i) row[i] = batch(r, i) * taper[i];
    detail::rfft(row, spec);
    for (std::size_t k = 0; k < bins; ++k) out.power[k] += std::norm(spec[k]);
  }
  const double scale = 1.0 / (sample_rate * taper_energy * realizations);
  for (std::size_t k = 0; k < bins; ++k) {
    const bool unpaired = k == 0 || (n % 2 == 0 && k == bins - 1);
    out.power[k] *= unpaired ? scale : 2.0 * scale;
  }
  return out;
}

void write_spectrum_csv(const Spectrum& spectrum,
                        const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "# lpmppi spectrum v1\nfreq_hz,power\n";
  char buf[64];
  for (std::size_t k = 0; k < spectrum.freqs.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", spectrum.freqs[k],
                  spectrum.power[k]);
    os << buf;
  }
}

Spectrum read_spectrum_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  Spectrum out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected two columns");
    }
    try {
      std::size_t used = 0;
      const double f = std::stod(line.substr(0, comma), &used);
      const double p = std::stod(line.substr(comma + 1));
      out.freqs.push_back(f);
      out.power.push_back(p);
    } catch (const std::invalid_argument&) {
      if (out.freqs.empty()) continue;  // header row
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": not a number");
    }
  }
  for (std::size_t k = 1; k < out.freqs.size(); ++k) {
    if (!(out.freqs[k] > out.freqs[k - 1])) {
      throw std::runtime_error(path.string() + ": frequencies not increasing");
    }
  }
  for (double p : out.power) {
    if (p < 0.0) throw std::runtime_error(path.string() + ": negative power");
  }
  return out;
}

}  // namespace lpmppi::dsp
