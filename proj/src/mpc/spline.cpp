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
#include <cmath>
#include <stdexcept>

#include "lpmppi/mpc.hpp"

namespace lpmppi::mpc {

Matrix natural_spline_matrix(int knots, int horizon,
                             std::span<const double> positions) {
  if (knots < 2 || knots > horizon) {
    throw std::invalid_argument("spline: need 2 <= knots <= horizon");
  }
  const double spacing =
      horizon > 1 ? static_cast<double>(horizon - 1) / (knots - 1) : 1.0;

  // Second derivatives at the knots as a linear map of the knot values:
  // M = solve(A, R y) with M_0 = M_{n-1} = 0.
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(knots, knots);
  if (knots > 2) {
    const int inner = knots - 2;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(inner, inner);
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(inner, knots);
    for (int i = 0; i < inner; ++i) {
      a(i, i) = 4.0 * spacing;
      if (i > 0) a(i, i - 1) = spacing;
      if (i + 1 < inner) a(i, i + 1) = spacing;
      const double c = 6.0 / spacing;
      r(i, i) += c;
      r(i, i + 1) -= 2.0 * c;
      r(i, i + 2) += c;
    }
    second.middleRows(1, inner) = a.partialPivLu().solve(r);
  }

  Matrix out(static_cast<Eigen::Index>(positions.size()), knots);
  for (std::size_t p = 0; p < positions.size(); ++p) {
    const double t = std::clamp(positions[p], 0.0, spacing * (knots - 1));
    const int seg = std::min(knots - 2, static_cast<int>(t / spacing));
    const double left = (seg + 1) * spacing - t;
    const double right = t - seg * spacing;
    const double h = spacing;
    // S(t) = M_i l^3/6h + M_{i+1} r^3/6h + (y_i - M_i h^2/6) l/h
    //        + (y_{i+1} - M_{i+1} h^2/6) r/h
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(knots);
    row(seg) += left / h;
    row(seg + 1) += right / h;
    row += second.row(seg) * (left * left * left / (6.0 * h) - h * left / 6.0);
    row += second.row(seg + 1) *
           (right * right * right / (6.0 * h) - h * right / 6.0);
    out.row(static_cast<Eigen::Index>(p)) = row;
  }
  return out;
}

}  // namespace lpmppi::mpc
