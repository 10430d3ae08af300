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

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

#include "lpmppi/dsp.hpp"

namespace lpmppi::dsp {

std::vector<double> savitzky_golay_weights(int window, int polyorder,
                                           int eval_index) {
  if (window < 1 || polyorder < 0 || polyorder >= window ||
      eval_index < 0 || eval_index >= window) {
    throw std::domain_error("savitzky_golay_weights: bad arguments");
  }
  // Abscissae centered and scaled to [-1, 1] for conditioning.
  const double half = std::max(1.0, (window - 1) / 2.0);
  const auto x = [&](int j) { return (j - (window - 1) / 2.0) / half; };

  Eigen::MatrixXd vander(window, polyorder + 1);
  for (int j = 0; j < window; ++j) {
    double p = 1.0;
    for (int k = 0; k <= polyorder; ++k, p *= x(j)) vander(j, k) = p;
  }
  Eigen::RowVectorXd eval(polyorder + 1);
  double p = 1.0;
  for (int k = 0; k <= polyorder; ++k, p *= x(eval_index)) eval(k) = p;

  const Eigen::RowVectorXd w =
      eval * vander.completeOrthogonalDecomposition().pseudoInverse();
  return {w.data(), w.data() + w.size()};
}

Matrix savitzky_golay_smooth(const Matrix& sequence, int window,
                             int polyorder) {
  const int length = static_cast<int>(sequence.rows());
  if (window % 2 == 0 || window < 3) {
    throw std::domain_error("savitzky_golay: window must be odd and >= 3");
  }
  if (polyorder < 0 || polyorder >= window) {
    throw std::domain_error("savitzky_golay: need 0 <= polyorder < window");
  }
  if (window > length) {
    throw std::domain_error("savitzky_golay: window longer than sequence");
  }
  const int half = window / 2;

  // Near an edge the window is truncated to the samples that exist; the fit
  // degree drops only if the truncated window cannot determine it.
  std::map<std::pair<int, int>, std::vector<double>> cache;
  const auto weights_for = [&](int span, int eval) -> const std::vector<double>& {
    auto it = cache.find({span, eval});
    if (it == cache.end()) {
      it = cache.emplace(std::pair{span, eval},
                         savitzky_golay_weights(span, std::min(polyorder, span - 1), eval))
               .first;
    }
    return it->second;
  };

  Matrix out(sequence.rows(), sequence.cols());
  for (int t = 0; t < length; ++t) {
    const int start = std::max(0, t - half);
    const int stop = std::min(length - 1, t + half);
    const std::vector<double>& w = weights_for(stop - start + 1, t - start);
    for (Eigen::Index c = 0; c < sequence.cols(); ++c) {
      double acc = 0.0;
      for (int j = start; j <= stop; ++j) acc += w[j - start] * sequence(j, c);
      out(t, c) = acc;
    }
  }
  return out;
}

}  // namespace lpmppi::dsp
