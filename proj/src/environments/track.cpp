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
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lpmppi/environments.hpp"

namespace lpmppi::env {
namespace {

using Point = std::array<double, 2>;

struct Projection {
  double dist_sq;
  double t;
};

Projection project_on_segment(const Point& a, const Point& b, double x,
                              double y) {
  const double dx = b[0] - a[0], dy = b[1] - a[1];
  const double len_sq = dx * dx + dy * dy;
  double t = len_sq > 0.0 ? ((x - a[0]) * dx + (y - a[1]) * dy) / len_sq : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double ex = a[0] + t * dx - x, ey = a[1] + t * dy - y;
  return {ex * ex + ey * ey, t};
}

double wrap_angle(double a) {
  return std::remainder(a, 2.0 * std::numbers::pi);
}

double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

}  // namespace

TrackSpec::TrackSpec(std::vector<std::array<double, 2>> points, double width)
    : points_(std::move(points)), width_(width) {
  if (!(width_ > 0.0)) throw std::invalid_argument("track: width must be > 0");
  if (points_.size() < 3) {
    throw std::invalid_argument("track: need at least three points");
  }
  if (points_.front() != points_.back()) points_.push_back(points_.front());
  cumulative_.assign(1, 0.0);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const double seg = std::hypot(points_[i][0] - points_[i - 1][0],
                                  points_[i][1] - points_[i - 1][1]);
    if (!(seg > 0.0)) {
      throw std::invalid_argument("track: repeated consecutive point");
    }
    cumulative_.push_back(cumulative_.back() + seg);
  }
  build_index();
}

// Each grid cell stores every segment that could be nearest to some point in
// the cell: with cell center c and circumradius rho, the nearest segment for
// any point in the cell lies within min_seg dist(c, seg) + 2 rho of c.
void TrackSpec::build_index() {
  double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
  double xmax = -xmin, ymax = -xmin;
  for (const Point& p : points_) {
    xmin = std::min(xmin, p[0]);
    xmax = std::max(xmax, p[0]);
    ymin = std::min(ymin, p[1]);
    ymax = std::max(ymax, p[1]);
  }
  const double margin = kMaxProjectionDistance + cell_;
  grid_x0_ = xmin - margin;
  grid_y0_ = ymin - margin;
  grid_nx_ = static_cast<int>(std::ceil((xmax - xmin + 2 * margin) / cell_));
  grid_ny_ = static_cast<int>(std::ceil((ymax - ymin + 2 * margin) / cell_));

  const int segments = static_cast<int>(points_.size()) - 1;
  const double rho = cell_ * std::sqrt(0.5);
  std::vector<double> dist(segments);
  cell_offsets_.assign(1, 0);
  cell_offsets_.reserve(static_cast<std::size_t>(grid_nx_) * grid_ny_ + 1);
  for (int iy = 0; iy < grid_ny_; ++iy) {
    for (int ix = 0; ix < grid_nx_; ++ix) {
      const double cx = grid_x0_ + (ix + 0.5) * cell_;
      const double cy = grid_y0_ + (iy + 0.5) * cell_;
      double best = std::numeric_limits<double>::infinity();
      for (int s = 0; s < segments; ++s) {
        dist[s] = std::sqrt(
            project_on_segment(points_[s], points_[s + 1], cx, cy).dist_sq);
        best = std::min(best, dist[s]);
      }
      if (best - rho <= kMaxProjectionDistance) {
        for (int s = 0; s < segments; ++s) {
          if (dist[s] <= best + 2.0 * rho) cell_segments_.push_back(s);
        }
      }
      cell_offsets_.push_back(static_cast<int>(cell_segments_.size()));
    }
  }
}

std::span<const int> TrackSpec::candidates(double x, double y) const {
  const double fx = std::floor((x - grid_x0_) / cell_);
  const double fy = std::floor((y - grid_y0_) / cell_);
  if (!(fx >= 0 && fy >= 0 && fx < grid_nx_ && fy < grid_ny_)) return {};
  const std::size_t cell =
      static_cast<std::size_t>(fy) * grid_nx_ + static_cast<std::size_t>(fx);
  return std::span<const int>(cell_segments_)
      .subspan(cell_offsets_[cell], cell_offsets_[cell + 1] - cell_offsets_[cell]);
}

std::shared_ptr<const TrackSpec> make_oval_track(double length, double width,
                                                 double radius,
                                                 double spacing) {
  using std::numbers::pi;
  const double straight = (length - 2.0 * pi * radius) / 2.0;
  if (!(straight > 0.0) || !(spacing > 0.0)) {
    throw std::invalid_argument("oval: radius too large for the length");
  }
  // Arc-length parameterization, counter-clockwise from the middle of the
  // bottom straight.
  const auto at = [&](double s) -> Point {
    const double half = straight / 2.0;
    const double arc = pi * radius;
    if (s < half) return {s, -radius};
    s -= half;
    if (s < arc) {
      const double a = -pi / 2.0 + s / radius;
      return {half + radius * std::cos(a), radius * std::sin(a)};
    }
    s -= arc;
    if (s < straight) return {half - s, radius};
    s -= straight;
    if (s < arc) {
      const double a = pi / 2.0 + s / radius;
      return {-half + radius * std::cos(a), radius * std::sin(a)};
    }
    s -= arc;
    return {-half + s, -radius};
  };
  const int segments = static_cast<int>(std::lround(length / spacing));
  std::vector<Point> pts;
  pts.reserve(segments + 1);
  for (int k = 0; k < segments; ++k) pts.push_back(at(length * k / segments));
  pts.push_back(pts.front());

  // Chords are slightly shorter than arcs; rescale to the exact length.
  double poly = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    poly += std::hypot(pts[i][0] - pts[i - 1][0], pts[i][1] - pts[i - 1][1]);
  }
  const double scale = length / poly;
  for (Point& p : pts) {
    p[0] *= scale;
    p[1] *= scale;
  }
  return std::make_shared<const TrackSpec>(std::move(pts), width);
}

std::shared_ptr<const TrackSpec> load_track_csv(const std::filesystem::path& path,
                                                double width) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read track " + path.string());
  std::vector<Point> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    Point p{};
    if (!(row >> p[0] >> p[1])) {
      if (pts.empty() && lineno == 1) continue;  // header
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected x,y");
    }
    pts.push_back(p);
  }
  return std::make_shared<const TrackSpec>(std::move(pts), width);
}

std::optional<FrenetPoint> try_frenet_project(const TrackSpec& track, double x,
                                              double y, double yaw, double vx,
                                              double vy) {
  const auto& pts = track.points();
  int best_seg = -1;
  Projection best{std::numeric_limits<double>::infinity(), 0.0};
  for (int s : track.candidates(x, y)) {
    const Projection p = project_on_segment(pts[s], pts[s + 1], x, y);
    if (p.dist_sq < best.dist_sq) {
      best = p;
      best_seg = s;
    }
  }
  if (best_seg < 0 ||
      best.dist_sq > kMaxProjectionDistance * kMaxProjectionDistance) {
    return std::nullopt;
  }
  const Point& a = pts[best_seg];
  const Point& b = pts[best_seg + 1];
  const double dx = b[0] - a[0], dy = b[1] - a[1];
  const double len = std::hypot(dx, dy);
  const double tx = dx / len, ty = dy / len;

  FrenetPoint f;
  f.s = track.arc_length()[best_seg] + best.t * len;
  if (f.s >= track.length()) f.s -= track.length();
  const double cross = tx * (y - a[1]) - ty * (x - a[0]);
  f.n = std::copysign(std::sqrt(best.dist_sq), cross);
  f.heading = std::atan2(dy, dx);
  const double wx = vx * std::cos(yaw) - vy * std::sin(yaw);
  const double wy = vx * std::sin(yaw) + vy * std::cos(yaw);
  f.v_f = wx * tx + wy * ty;
  return f;
}

FrenetPoint frenet_project(const TrackSpec& track, double x, double y,
                           double yaw, double vx, double vy) {
  auto f = try_frenet_project(track, x, y, yaw, vx, vy);
  if (!f) throw std::out_of_range("frenet_project: point is off the track region");
  return *f;
}

double racing_cost(double v_f, double n, double alpha, double yaw,
                   double track_heading, double track_width) {
  const double boundary = softplus(-100.0 * (track_width / 2.0 - std::abs(n)));
  const double slip = std::max(std::abs(alpha) - 0.3, 0.0);
  const double heading = wrap_angle(yaw - track_heading);
  return -v_f + 100.0 * boundary + 100.0 * slip + 2.0 * heading * heading;
}

mpc::OCPSpec make_racing_ocp(const RacingSetup& setup, int horizon) {
  setup.car.validate();
  if (!setup.track) throw std::invalid_argument("racing: track is missing");
  mpc::OCPSpec ocp;
  ocp.state_dim = 6;
  ocp.control_dim = 2;
  ocp.dt = setup.car.dt;
  ocp.horizon = horizon;
  const SingleTrackParams car = setup.car;
  ocp.dynamics = [car](std::span<const double> x, std::span<const double> u,
                       std::span<double> next) {
    single_track_step(car, x, u, next);
  };
  std::shared_ptr<const TrackSpec> track = setup.track;
  ocp.step_cost = [track](std::span<const double> x, std::span<const double>) {
    const CarState s = CarState::from(x);
    const auto f = try_frenet_project(*track, s.x, s.y, s.yaw, s.vx, s.vy);
    // Beyond the indexed region; dominates any on-track cost.
    if (!f) return 1e5;
    return racing_cost(f->v_f, f->n, slip_angle(s), s.yaw, f->heading,
                       track->width());
  };
  ocp.terminal_cost = [](std::span<const double>) { return 0.0; };
  ocp.lower = Vector(2);
  ocp.upper = Vector(2);
  ocp.lower << -car.max_steer, car.min_accel;
  ocp.upper << car.max_steer, car.max_accel;
  return ocp;
}

CarState racing_start_state(const TrackSpec& track) {
  const auto& p = track.points();
  CarState s;
  s.x = p[0][0];
  s.y = p[0][1];
  s.yaw = std::atan2(p[1][1] - p[0][1], p[1][0] - p[0][0]);
  return s;
}

}  // namespace lpmppi::env
