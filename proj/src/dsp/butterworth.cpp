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

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lpmppi/dsp.hpp"

namespace lpmppi::dsp {

std::complex<double> Biquad::response(std::complex<double> z) const {
  const std::complex<double> zi = 1.0 / z;
  const std::complex<double> zi2 = zi * zi;
  return (b0 + b1 * zi + b2 * zi2) / (1.0 + a1 * zi + a2 * zi2);
}

std::vector<std::complex<double>> BiquadCascade::poles() const {
  std::vector<std::complex<double>> out;
  for (const Biquad& s : sections) {
    if (s.a2 == 0.0) {
      out.emplace_back(-s.a1, 0.0);
      continue;
    }
    // z^2 + a1 z + a2 = 0
    const std::complex<double> disc =
        std::sqrt(std::complex<double>(s.a1 * s.a1 - 4.0 * s.a2, 0.0));
    out.push_back((-s.a1 + disc) / 2.0);
    out.push_back((-s.a1 - disc) / 2.0);
  }
  return out;
}

bool BiquadCascade::is_stable() const {
  for (const auto& p : poles()) {
    if (!(std::abs(p) < 1.0)) return false;
  }
  return true;
}

BiquadCascade design_butterworth_lowpass(double fc_norm, int order) {
  if (!(fc_norm > 0.0 && fc_norm < 1.0)) {
    throw std::domain_error("butterworth: fc_norm must lie in (0, 1)");
  }
  if (order < 1) {
    throw std::domain_error("butterworth: order must be >= 1");
  }
  using std::numbers::pi;

  BiquadCascade cascade;
  cascade.fc_norm = fc_norm;
  cascade.order = order;

  // Prewarped analog cutoff for s = (1 - z^-1) / (1 + z^-1).
  const double w = std::tan(pi * fc_norm / 2.0);
  const double w2 = w * w;

  if (order % 2 == 1) {
    const double k = w / (1.0 + w);
    cascade.sections.push_back({k, k, 0.0, (w - 1.0) / (w + 1.0), 0.0});
  }
  // Conjugate pole pairs at angle theta from the imaginary axis, lowest Q
  // first.
  for (int k = order / 2 - 1; k >= 0; --k) {
    const double theta = pi * (2.0 * k + 1.0) / (2.0 * order);
    const double q = 2.0 * w * std::sin(theta);
    const double a0 = 1.0 + q + w2;
    const double b = w2 / a0;
    cascade.sections.push_back(
        {b, 2.0 * b, b, (2.0 * w2 - 2.0) / a0, (1.0 - q + w2) / a0});
  }
  return cascade;
}

double magnitude_response(const BiquadCascade& cascade, double f_norm) {
  if (!(f_norm >= 0.0 && f_norm <= 1.0)) {
    throw std::domain_error("magnitude_response: f_norm must lie in [0, 1]");
  }
  const std::complex<double> z = std::polar(1.0, std::numbers::pi * f_norm);
  std::complex<double> h = cascade.gain;
  for (const Biquad& s : cascade.sections) h *= s.response(z);
  return std::abs(h);
}

CascadeFilter::CascadeFilter(const BiquadCascade& cascade)
    : sections_(cascade.sections),
      gain_(cascade.gain),
      s1_(cascade.sections.size(), 0.0),
      s2_(cascade.sections.size(), 0.0) {}

double CascadeFilter::step(double x) {
  double v = gain_ * x;
  for (std::size_t i = 0; i < sections_.size(); ++i) {
    const Biquad& s = sections_[i];
    const double y = s.b0 * v + s1_[i];
    s1_[i] = s.b1 * v - s.a1 * y + s2_[i];
    s2_[i] = s.b2 * v - s.a2 * y;
    v = y;
  }
  return v;
}

void CascadeFilter::reset() {
  std::fill(s1_.begin(), s1_.end(), 0.0);
  std::fill(s2_.begin(), s2_.end(), 0.0);
}

void CascadeFilter::process(std::span<double> signal) {
  for (double& x : signal) x = step(x);
}

void CascadeFilter::set_state(std::span<const double> state) {
  if (static_cast<int>(state.size()) != state_size()) {
    throw std::invalid_argument("CascadeFilter: state size mismatch");
  }
  for (std::size_t i = 0; i < sections_.size(); ++i) {
    s1_[i] = state[2 * i];
    s2_[i] = state[2 * i + 1];
  }
}

void CascadeFilter::get_state(std::span<double> state) const {
  if (static_cast<int>(state.size()) != state_size()) {
    throw std::invalid_argument("CascadeFilter: state size mismatch");
  }
  for (std::size_t i = 0; i < sections_.size(); ++i) {
    state[2 * i] = s1_[i];
    state[2 * i + 1] = s2_[i];
  }
}

Matrix stationary_state_factor(const BiquadCascade& cascade) {
  // State-space form s' = A s + B x read off the recursion itself.
  CascadeFilter filter(cascade);
  const int n = filter.state_size();
  Matrix a(n, n);
  Vector b(n), e(n), next(n);
  for (int j = 0; j < n; ++j) {
    e.setZero();
    e[j] = 1.0;
    filter.set_state(e);
    filter.step(0.0);
    filter.get_state(next);
    a.col(j) = next;
  }
  filter.reset();
  filter.step(1.0);
  filter.get_state(b);

  // Doubling iteration for P = A P A^T + B B^T.
  Matrix p = b * b.transpose();
  Matrix ak = a;
  for (int k = 0; k < 64 && ak.cwiseAbs().maxCoeff() > 1e-18; ++k) {
    p += ak * p * ak.transpose();
    ak = (ak * ak).eval();
  }
  // P is only semidefinite when first-order sections carry an idle s2.
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (p + p.transpose()));
  return eig.eigenvectors() *
         eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

Matrix apply_filter(const BiquadCascade& cascade, const Matrix& sequence,
                    const Matrix& burn_in) {
  if (burn_in.size() > 0 && burn_in.cols() != sequence.cols()) {
    throw std::invalid_argument("apply_filter: burn-in column count mismatch");
  }
  Matrix out(sequence.rows(), sequence.cols());
  CascadeFilter filter(cascade);
  for (Eigen::Index c = 0; c < sequence.cols(); ++c) {
    filter.reset();
    for (Eigen::Index t = 0; t < burn_in.rows(); ++t) filter.step(burn_in(t, c));
    for (Eigen::Index t = 0; t < sequence.rows(); ++t) {
      out(t, c) = filter.step(sequence(t, c));
    }
  }
  return out;
}

}  // namespace lpmppi::dsp
