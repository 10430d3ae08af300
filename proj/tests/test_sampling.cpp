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

#include <gtest/gtest.h>

#include <cmath>

#include "lpmppi/dsp.hpp"
#include "lpmppi/sampling.hpp"

namespace lpmppi::sampling {
namespace {

SamplerSpec spec_of(NoiseKind kind, std::vector<double> sigma) {
  SamplerSpec s;
  s.kind = kind;
  s.sigma = std::move(sigma);
  s.control_rate_hz = 20.0;
  s.fc_hz = 2.0;
  s.order = 2;
  s.beta = 1.0;
  return s;
}

double batch_std(const PerturbationBatch& b, int d) {
  double sum = 0, sq = 0;
  int n = 0;
  for (const auto& m : b.data) {
    for (Eigen::Index t = 0; t < m.rows(); ++t) sum += m(t, d), sq += m(t, d) * m(t, d), ++n;
  }
  const double mean = sum / n;
  return std::sqrt(sq / n - mean * mean);
}

double lag1_correlation(const PerturbationBatch& b) {
  double num = 0, den = 0;
  for (const auto& m : b.data) {
    for (Eigen::Index t = 0; t + 1 < m.rows(); ++t) num += m(t, 0) * m(t + 1, 0);
    for (Eigen::Index t = 0; t < m.rows(); ++t) den += m(t, 0) * m(t, 0);
  }
  return num / den;
}

TEST(Sampling, BatchIsPureFunctionOfSeed) {
  for (auto kind : {NoiseKind::kWhite, NoiseKind::kLowpass, NoiseKind::kColored}) {
    Rng a(42), b(42), c(43);
    const auto x = sample(a, spec_of(kind, {1.0, 0.5}), 8, 16);
    const auto y = sample(b, spec_of(kind, {1.0, 0.5}), 8, 16);
    const auto z = sample(c, spec_of(kind, {1.0, 0.5}), 8, 16);
    ASSERT_EQ(x.rollouts(), 8);
    ASSERT_EQ(x.horizon(), 16);
    ASSERT_EQ(x.dims(), 2);
    EXPECT_EQ(x.seed, y.seed);
    for (int i = 0; i < 8; ++i) {
      EXPECT_EQ(x.data[i], y.data[i]);
      EXPECT_NE(x.data[i], z.data[i]);
    }
  }
}

TEST(Sampling, RolloutStreamsDoNotDependOnBatchSize) {
  Rng a(7), b(7);
  const auto small = sample_white(a, spec_of(NoiseKind::kWhite, {1.0}), 4, 10);
  const auto large = sample_white(b, spec_of(NoiseKind::kWhite, {1.0}), 32, 10);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(small.data[i], large.data[i]);
}

TEST(Sampling, ConsecutiveBatchesDiffer) {
  Rng rng(1);
  const auto spec = spec_of(NoiseKind::kWhite, {1.0});
  const auto x = sample(rng, spec, 2, 5);
  const auto y = sample(rng, spec, 2, 5);
  EXPECT_NE(x.seed, y.seed);
  EXPECT_NE(x.data[0], y.data[0]);
}

TEST(Sampling, WhiteVarianceContract) {
  Rng rng(2);
  const auto b = sample_white(rng, spec_of(NoiseKind::kWhite, {0.5, 2.0}), 512, 64);
  // 32768 samples: the standard error of the std is about 0.4%.
  EXPECT_NEAR(batch_std(b, 0), 0.5, 0.5 * 0.02);
  EXPECT_NEAR(batch_std(b, 1), 2.0, 2.0 * 0.02);
}

TEST(Sampling, FilteredFamiliesAreRenormalizedPerDimension) {
  for (auto kind : {NoiseKind::kLowpass, NoiseKind::kColored}) {
    Rng rng(3);
    const auto b = sample(rng, spec_of(kind, {0.3, 4.0}), 16, 30);
    EXPECT_NEAR(batch_std(b, 0), 0.3, 1e-12);
    EXPECT_NEAR(batch_std(b, 1), 4.0, 1e-12);
  }
}

TEST(Sampling, LowerCutoffMeansStrongerCorrelation) {
  double prev = -1.0;
  for (double fc : {8.0, 4.0, 2.0, 1.0, 0.5}) {
    Rng rng(4);
    auto spec = spec_of(NoiseKind::kLowpass, {1.0});
    spec.fc_hz = fc;
    const double rho = lag1_correlation(sample_lowpass(rng, spec, 256, 64));
    EXPECT_GT(rho, prev) << fc;
    prev = rho;
  }
  Rng rng(4);
  const double white = lag1_correlation(
      sample_white(rng, spec_of(NoiseKind::kWhite, {1.0}), 256, 64));
  EXPECT_NEAR(white, 0.0, 0.03);
}

TEST(Sampling, LowpassMatchesFilteringTheStreamDirectly) {
  // Rebuild rollout 3 by hand: state draws, then the filtered input draws.
  auto spec = spec_of(NoiseKind::kLowpass, {1.0});
  Rng rng(10);
  const auto batch = sample_lowpass(rng, spec, 5, 12);
  const auto cascade = dsp::design_butterworth_lowpass(spec.fc_norm(), spec.order);
  const Matrix factor = dsp::stationary_state_factor(cascade);
  Rng stream(derive_seed(batch.seed, {3}));
  Vector z(factor.cols());
  for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = stream.normal();
  dsp::CascadeFilter filter(cascade);
  const Vector state = factor * z;
  filter.set_state(state);
  Vector y(12);
  for (int t = 0; t < 12; ++t) y[t] = filter.step(stream.normal());
  // Equal up to the common renormalization factor.
  const double k = batch.data[3](0, 0) / y[0];
  for (int t = 0; t < 12; ++t) EXPECT_NEAR(batch.data[3](t, 0), k * y[t], 1e-12);
}

TEST(Sampling, LowpassHasNoStartUpTransient) {
  // Across rollouts, the early samples are as spread as the late ones.
  auto spec = spec_of(NoiseKind::kLowpass, {1.0});
  spec.fc_hz = 0.5;
  spec.order = 4;
  Rng rng(19);
  const auto b = sample_lowpass(rng, spec, 20000, 40);
  for (int t : {0, 1, 5, 39}) {
    double sq = 0.0;
    for (const auto& m : b.data) sq += m(t, 0) * m(t, 0);
    EXPECT_NEAR(sq / 20000, 1.0, 0.05) << t;
  }
}

TEST(Sampling, ColoredWithZeroBetaIsWhite) {
  Rng a(12), b(12);
  auto colored = spec_of(NoiseKind::kColored, {0.7, 1.5});
  colored.beta = 0.0;
  const auto x = sample(a, colored, 6, 20);
  const auto y = sample(b, spec_of(NoiseKind::kWhite, {0.7, 1.5}), 6, 20);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(x.data[i], y.data[i]);
}

TEST(Sampling, WhiteScalarStd) {
  Rng rng(13);
  const auto b = sample_white(rng, spec_of(NoiseKind::kWhite, {2.0}), 10000, 1);
  const double s = batch_std(b, 0);
  EXPECT_GE(s, 1.9);
  EXPECT_LE(s, 2.1);
}

TEST(Sampling, VarianceContractForEveryKind) {
  for (auto kind : {NoiseKind::kWhite, NoiseKind::kLowpass, NoiseKind::kColored}) {
    Rng rng(14);
    const auto b = sample(rng, spec_of(kind, {0.4, 3.0}), 100, 100);
    EXPECT_NEAR(batch_std(b, 0), 0.4, 0.4 * 0.05);
    EXPECT_NEAR(batch_std(b, 1), 3.0, 3.0 * 0.05);
  }
}

TEST(Sampling, WideOpenFirstOrderLowpassIsNearlyWhite) {
  Rng rng(15);
  auto spec = spec_of(NoiseKind::kLowpass, {1.0});
  spec.order = 1;
  spec.fc_hz = 0.49 * spec.control_rate_hz;
  EXPECT_LT(std::abs(lag1_correlation(sample_lowpass(rng, spec, 100, 100))), 0.15);
}

TEST(Sampling, CorrelationOrderingAcrossFamilies) {
  auto lowpass = spec_of(NoiseKind::kLowpass, {1.0});
  lowpass.fc_hz = 1.0;
  Rng a(16), b(16), c(16);
  const double lp = lag1_correlation(sample(a, lowpass, 256, 1024));
  const double colored = lag1_correlation(sample(b, spec_of(NoiseKind::kColored, {1.0}), 256, 1024));
  const double white = lag1_correlation(sample(c, spec_of(NoiseKind::kWhite, {1.0}), 256, 1024));
  EXPECT_GT(lp, colored);
  EXPECT_GT(colored, white);
  EXPECT_NEAR(white, 0.0, 0.01);
}

TEST(Sampling, LowpassPowerConcentratesBelowTwiceCutoff) {
  auto spec = spec_of(NoiseKind::kLowpass, {1.0});
  spec.fc_hz = 0.1 * spec.control_rate_hz / 2.0;
  spec.order = 2;
  Rng rng(17);
  const auto b = sample_lowpass(rng, spec, 64, 1024);
  Matrix rows(64, 1024);
  for (int i = 0; i < 64; ++i) rows.row(i) = b.data[i].col(0).transpose();
  const auto psd = dsp::periodogram_psd(rows, spec.control_rate_hz);
  double below = 0.0, total = 0.0;
  for (std::size_t k = 0; k < psd.freqs.size(); ++k) {
    total += psd.power[k];
    if (psd.freqs[k] < 2.0 * spec.fc_hz) below += psd.power[k];
  }
  EXPECT_GE(below / total, 0.8);
}

TEST(Sampling, RolloutsAreMutuallyUncorrelated) {
  // Pooled correlation between neighbouring rollouts.
  for (auto kind : {NoiseKind::kWhite, NoiseKind::kLowpass, NoiseKind::kColored}) {
    Rng rng(18);
    const auto b = sample(rng, spec_of(kind, {1.0}), 200, 100);
    double cross = 0.0, power = 0.0;
    for (int i = 0; i + 1 < 200; ++i) {
      cross += b.data[i].col(0).dot(b.data[i + 1].col(0));
      power += b.data[i].col(0).squaredNorm();
    }
    EXPECT_LT(std::abs(cross / power), 0.05) << to_string(kind);
  }
}

TEST(Sampling, RejectsInvalidSpecs) {
  Rng rng(0);
  auto s = spec_of(NoiseKind::kLowpass, {1.0});
  s.fc_hz = 10.0;  // Nyquist
  EXPECT_THROW(sample(rng, s, 2, 2), std::invalid_argument);
  s.fc_hz = 2.0;
  s.order = 0;
  EXPECT_THROW(sample(rng, s, 2, 2), std::invalid_argument);
  EXPECT_THROW(sample(rng, spec_of(NoiseKind::kWhite, {}), 2, 2), std::invalid_argument);
  EXPECT_THROW(sample(rng, spec_of(NoiseKind::kWhite, {-1.0}), 2, 2),
               std::invalid_argument);
  EXPECT_THROW(sample(rng, spec_of(NoiseKind::kWhite, {1.0}), 0, 2),
               std::invalid_argument);
  EXPECT_THROW(sample_white(rng, spec_of(NoiseKind::kColored, {1.0}), 2, 2),
               std::invalid_argument);
  auto c = spec_of(NoiseKind::kColored, {1.0});
  c.beta = -0.5;
  EXPECT_THROW(sample(rng, c, 2, 2), std::invalid_argument);
  EXPECT_THROW(parse_noise_kind("pink"), std::invalid_argument);
  EXPECT_EQ(parse_noise_kind(to_string(NoiseKind::kLowpass)), NoiseKind::kLowpass);
}

}  // namespace
}  // namespace lpmppi::sampling
