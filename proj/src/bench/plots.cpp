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

// Minimal SVG rendering of the harness CSVs. Everything is formatted with
// fixed precision so the files are byte-stable.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "bench/csv.hpp"
#include "lpmppi/bench.hpp"

namespace lpmppi::bench {
namespace {

namespace fs = std::filesystem;

constexpr double kWidth = 640, kHeight = 400, kMargin = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(what + ": not a number '" + s + "'");
  }
}

int require(const detail::CsvTable& t, const std::string& col, const std::string& file) {
  const int i = t.column(col);
  if (i < 0) throw std::runtime_error(file + ": missing column '" + col + "'");
  return i;
}

struct Series {
  std::string label;
  std::vector<double> x, y;
};

class Svg {
 public:
  explicit Svg(const std::string& title) {
    os_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    text(kWidth / 2, 24, title, "middle", 14);
  }
  void text(double x, double y, const std::string& s, const char* anchor = "start",
            int size = 12) {
    os_ << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" text-anchor=\""
        << anchor << "\" font-size=\"" << size << "\">" << escape(s) << "</text>\n";
  }
  void line(double x1, double y1, double x2, double y2, const char* color,
            double width = 1.0) {
    os_ << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\"" << fmt(x2)
        << "\" y2=\"" << fmt(y2) << "\" stroke=\"" << color << "\" stroke-width=\""
        << fmt(width) << "\"/>\n";
  }
  void rect(double x, double y, double w, double h, const std::string& fill) {
    os_ << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w)
        << "\" height=\"" << fmt(h) << "\" fill=\"" << fill
        << "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const char* color) {
    os_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) os_ << ' ';
      os_ << fmt(pts[i].first) << ',' << fmt(pts[i].second);
    }
    os_ << "\"/>\n";
  }
  void frame() {
    line(kMargin, kHeight - kMargin, kWidth - kMargin, kHeight - kMargin, "black");
    line(kMargin, kMargin, kMargin, kHeight - kMargin, "black");
  }
  std::string str() { return os_.str() + "</svg>\n"; }

 private:
  static std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '<') out += "&lt;";
      else if (c == '>') out += "&gt;";
      else if (c == '&') out += "&amp;";
      else out += c;
    }
    return out;
  }
  std::ostringstream os_;
};

void save(const fs::path& path, const std::string& text, PlotReport& report) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
  report.written.push_back(path);
}

// Line chart; `log_y` plots log10 of positive values.
std::string line_chart(const std::string& title, const std::string& xlabel,
                       const std::string& ylabel, const std::vector<Series>& series,
                       bool log_y) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  auto ty = [&](double v) { return log_y ? std::log10(std::max(v, 1e-300)) : v; };
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  const double pw = kWidth - 2 * kMargin, ph = kHeight - 2 * kMargin;
  auto px = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kHeight - kMargin - (ty(y) - y0) / (y1 - y0) * ph; };

  Svg svg(title);
  svg.frame();
  svg.text(kWidth / 2, kHeight - 20, xlabel, "middle");
  svg.text(14, kHeight / 2, ylabel + (log_y ? " (log10)" : ""), "start");
  svg.text(kMargin, kHeight - kMargin + 16, short_num(x0), "middle");
  svg.text(kWidth - kMargin, kHeight - kMargin + 16, short_num(x1), "middle");
  svg.text(kMargin - 4, kHeight - kMargin, short_num(y0), "end");
  svg.text(kMargin - 4, kMargin + 4, short_num(y1), "end");
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % std::size(kPalette)];
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < series[k].x.size(); ++i) {
      pts.emplace_back(px(series[k].x[i]), py(series[k].y[i]));
    }
    svg.polyline(pts, color);
    const double ly = kMargin + 14.0 * static_cast<double>(k);
    svg.line(kWidth - kMargin - 120, ly - 4, kWidth - kMargin - 100, ly - 4, color, 2);
    svg.text(kWidth - kMargin - 96, ly, series[k].label);
  }
  return svg.str();
}

void plot_psd(const std::vector<fs::path>& files, const fs::path& dir,
              PlotReport& report) {
  std::vector<Series> series;
  for (const auto& f : files) {
    try {
      const auto spec = dsp::read_spectrum_csv(f);
      Series s;
      s.label = f.stem().string().substr(4);
      s.x = spec.freqs;
      s.y = spec.power;
      series.push_back(std::move(s));
    } catch (const std::exception& e) {
      report.errors.push_back(f.filename().string() + ": " + e.what());
    }
  }
  if (series.empty()) return;
  save(dir / "psd_overlay.svg",
       line_chart("Power spectral density", "frequency (Hz)", "power", series, true),
       report);
}

void plot_heatmaps(const fs::path& file, const fs::path& dir, PlotReport& report) {
  const std::string name = file.filename().string();
  const auto t = detail::read_csv(file);
  const int ch = require(t, "horizon", name), cn = require(t, "rollouts", name);
  const int cc = require(t, "controller", name), cv = require(t, "mean_cost", name);
  if (t.rows.empty()) {
    std::ofstream(dir / "heatmap_NOTICE.txt") << "aggregate.csv has no rows\n";
    report.written.push_back(dir / "heatmap_NOTICE.txt");
    return;
  }
  // controller -> (H, N) -> cost, controllers in first-appearance order.
  std::vector<std::string> order;
  std::map<std::string, std::map<std::pair<int, int>, double>> grid;
  std::vector<int> hs, ns;
  for (const auto& row : t.rows) {
    const int h = static_cast<int>(parse_number(row[ch], name));
    const int n = static_cast<int>(parse_number(row[cn], name));
    if (!grid.contains(row[cc])) order.push_back(row[cc]);
    grid[row[cc]][{h, n}] = parse_number(row[cv], name);
    hs.push_back(h);
    ns.push_back(n);
  }
  for (auto* v : {&hs, &ns}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& cells = grid[order[k]];
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& [key, v] : cells) {
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    Svg svg("Mean cost: " + order[k]);
    const double cw = (kWidth - 2 * kMargin) / static_cast<double>(ns.size());
    const double chh = (kHeight - 2 * kMargin) / static_cast<double>(hs.size());
    for (std::size_t i = 0; i < hs.size(); ++i) {
      svg.text(kMargin - 4, kMargin + chh * (i + 0.5) + 4, "H=" + std::to_string(hs[i]),
               "end");
      for (std::size_t j = 0; j < ns.size(); ++j) {
        const auto it = cells.find({hs[i], ns[j]});
        std::string fill = "#dddddd";
        std::string label = "-";
        if (it != cells.end() && std::isfinite(it->second)) {
          const double u = hi > lo ? (it->second - lo) / (hi - lo) : 0.5;
          char buf[16];
          std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(255 * u),
                        static_cast<int>(80 + 100 * (1 - u)),
                        static_cast<int>(255 * (1 - u)));
          fill = buf;
          label = short_num(it->second);
        }
        const double x = kMargin + cw * j, y = kMargin + chh * i;
        svg.rect(x, y, cw, chh, fill);
        svg.text(x + cw / 2, y + chh / 2 + 4, label, "middle");
      }
    }
    for (std::size_t j = 0; j < ns.size(); ++j) {
      svg.text(kMargin + cw * (j + 0.5), kHeight - kMargin + 16,
               "N=" + std::to_string(ns[j]), "middle");
    }
    save(dir / ("heatmap_" + std::to_string(k) + ".svg"), svg.str(), report);
  }
}

void plot_controls(const fs::path& file, const fs::path& dir, PlotReport& report) {
  const std::string name = file.filename().string();
  const auto t = detail::read_csv(file);
  const int cc = require(t, "controller", name), cs = require(t, "seed", name);
  const int ct = require(t, "step", name), cd = require(t, "dim", name);
  const int cv = require(t, "value", name);
  // First seed of each controller only.
  std::map<int, std::vector<Series>> by_dim;
  std::map<std::string, std::string> first_seed;
  for (const auto& row : t.rows) {
    auto [it, fresh] = first_seed.emplace(row[cc], row[cs]);
    if (it->second != row[cs]) continue;
    const int d = static_cast<int>(parse_number(row[cd], name));
    auto& list = by_dim[d];
    auto s = std::find_if(list.begin(), list.end(),
                          [&](const Series& x) { return x.label == row[cc]; });
    if (s == list.end()) {
      list.push_back({row[cc], {}, {}});
      s = list.end() - 1;
    }
    s->x.push_back(parse_number(row[ct], name));
    s->y.push_back(parse_number(row[cv], name));
  }
  for (const auto& [d, series] : by_dim) {
    save(dir / ("controls_dim" + std::to_string(d) + ".svg"),
         line_chart("Applied control, dimension " + std::to_string(d), "step", "u",
                    series, false),
         report);
  }
}

void plot_distance(const fs::path& file, const fs::path& dir, PlotReport& report) {
  const std::string name = file.filename().string();
  const auto t = detail::read_csv(file);
  const int cc = require(t, "cell", name), cl = require(t, "controller", name);
  const int cd = require(t, "distance_m", name);
  std::vector<std::pair<std::string, std::vector<double>>> groups;
  for (const auto& row : t.rows) {
    if (row[cd].empty()) continue;
    const std::string label = row[cl] + " #" + row[cc];
    auto g = std::find_if(groups.begin(), groups.end(),
                          [&](const auto& x) { return x.first == label; });
    if (g == groups.end()) {
      groups.push_back({label, {}});
      g = groups.end() - 1;
    }
    g->second.push_back(parse_number(row[cd], name));
  }
  if (groups.empty()) return;
  double lo = INFINITY, hi = -INFINITY;
  for (auto& [label, v] : groups) {
    std::sort(v.begin(), v.end());
    lo = std::min(lo, v.front());
    hi = std::max(hi, v.back());
  }
  if (!(hi > lo)) hi = lo + 1.0;
  const double ph = kHeight - 2 * kMargin;
  auto py = [&](double v) { return kHeight - kMargin - (v - lo) / (hi - lo) * ph; };
  auto q = [](const std::vector<double>& v, double p) {
    return v[static_cast<std::size_t>(p * static_cast<double>(v.size() - 1))];
  };
  Svg svg("Distance covered (m)");
  svg.frame();
  svg.text(kMargin - 4, kHeight - kMargin, short_num(lo), "end");
  svg.text(kMargin - 4, kMargin + 4, short_num(hi), "end");
  const double bw = (kWidth - 2 * kMargin) / static_cast<double>(groups.size());
  for (std::size_t k = 0; k < groups.size(); ++k) {
    const auto& v = groups[k].second;
    const double cx = kMargin + bw * (k + 0.5);
    const char* color = kPalette[k % std::size(kPalette)];
    svg.line(cx, py(v.front()), cx, py(v.back()), color);
    svg.rect(cx - bw / 4, py(q(v, 0.75)), bw / 2, py(q(v, 0.25)) - py(q(v, 0.75)), color);
    svg.line(cx - bw / 4, py(q(v, 0.5)), cx + bw / 4, py(q(v, 0.5)), "black", 2);
    svg.text(cx, kHeight - kMargin + 16, groups[k].first, "middle", 10);
  }
  save(dir / "distance.svg", svg.str(), report);
}

}  // namespace

PlotReport emit_plots(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw std::invalid_argument("plot: not a directory: " + dir.string());
  }
  PlotReport report;
  std::vector<fs::path> psd;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.starts_with("psd_") && name.ends_with(".csv")) psd.push_back(entry.path());
  }
  std::sort(psd.begin(), psd.end());
  plot_psd(psd, dir, report);

  const std::pair<const char*, void (*)(const fs::path&, const fs::path&, PlotReport&)>
      tables[] = {{"aggregate.csv", plot_heatmaps},
                  {"controls.csv", plot_controls},
                  {"episodes.csv", plot_distance}};
  for (const auto& [file, fn] : tables) {
    if (!fs::exists(dir / file)) continue;
    try {
      fn(dir / file, dir, report);
    } catch (const std::exception& e) {
      report.errors.push_back(std::string(file) + ": " + e.what());
    }
  }
  if (!report.errors.empty()) {
    std::ofstream os(dir / "plot_errors.txt", std::ios::binary);
    for (const auto& e : report.errors) os << e << "\n";
  }
  return report;
}

}  // namespace lpmppi::bench
