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

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "lpmppi/bench.hpp"

namespace py = pybind11;
using namespace lpmppi;

namespace {

sampling::SamplerSpec make_spec(const std::string& kind, std::vector<double> sigma,
                                double control_rate_hz, double fc_hz, int order,
                                double beta) {
  sampling::SamplerSpec s;
  s.kind = sampling::parse_noise_kind(kind);
  s.sigma = std::move(sigma);
  s.control_rate_hz = control_rate_hz;
  s.fc_hz = fc_hz;
  s.order = order;
  s.beta = beta;
  return s;
}

py::array_t<double> batch_array(const sampling::PerturbationBatch& b) {
  py::array_t<double> out({b.rollouts(), b.horizon(), b.dims()});
  auto v = out.mutable_unchecked<3>();
  for (int i = 0; i < b.rollouts(); ++i) {
    for (int t = 0; t < b.horizon(); ++t) {
      for (int d = 0; d < b.dims(); ++d) v(i, t, d) = b.data[i](t, d);
    }
  }
  return out;
}

py::tuple spectrum_tuple(const dsp::Spectrum& s) {
  return py::make_tuple(py::array(py::cast(s.freqs)), py::array(py::cast(s.power)));
}

py::dict episode_dict(const metrics::EpisodeResult& r) {
  py::dict d;
  d["applied_controls"] = r.applied_controls;
  d["states"] = r.states;
  d["step_costs"] = py::array(py::cast(r.step_costs));
  d["compute_seconds"] = py::array(py::cast(r.compute_seconds));
  d["seed"] = r.seed;
  d["fingerprint"] = r.config_fingerprint;
  d["terminated_early"] = r.terminated_early;
  d["termination_reason"] = r.termination_reason;
  d["cumulative_cost"] = r.cumulative_cost();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sampling-based MPC with low-pass filtered perturbations";

  py::class_<dsp::BiquadCascade>(m, "BiquadCascade")
      .def_readonly("gain", &dsp::BiquadCascade::gain)
      .def_readonly("fc_norm", &dsp::BiquadCascade::fc_norm)
      .def_readonly("order", &dsp::BiquadCascade::order)
      .def_property_readonly("sos", [](const dsp::BiquadCascade& c) {
        // scipy-style rows [b0, b1, b2, 1, a1, a2]; the gain is kept separate.
        Matrix sos(static_cast<Eigen::Index>(c.sections.size()), 6);
        for (std::size_t i = 0; i < c.sections.size(); ++i) {
          const auto& s = c.sections[i];
          sos.row(static_cast<Eigen::Index>(i)) << s.b0, s.b1, s.b2, 1.0, s.a1, s.a2;
        }
        return sos;
      })
      .def("magnitude", [](const dsp::BiquadCascade& c, double f) {
        return dsp::magnitude_response(c, f);
      }, py::arg("f_norm"))
      .def("is_stable", &dsp::BiquadCascade::is_stable);

  m.def("butterworth", &dsp::design_butterworth_lowpass, py::arg("fc_norm"),
        py::arg("order"), "Digital Butterworth low-pass as a biquad cascade.");
  m.def("apply_filter",
        [](const dsp::BiquadCascade& c, const Matrix& x) { return dsp::apply_filter(c, x); },
        py::arg("cascade"), py::arg("sequence"),
        "Causal filtering of each column from zero state.");
  m.def("savitzky_golay", &dsp::savitzky_golay_smooth, py::arg("sequence"),
        py::arg("window"), py::arg("polyorder"));
  m.def("colored_noise",
        [](double beta, int length, int dims, std::uint64_t seed) {
          Rng rng(seed);
          return dsp::generate_colored_noise(rng, beta, length, dims);
        },
        py::arg("beta"), py::arg("length"), py::arg("dims") = 1, py::arg("seed") = 0);
  m.def("periodogram",
        [](const Matrix& batch, double rate, bool hann) {
          return spectrum_tuple(dsp::periodogram_psd(
              batch, rate, hann ? dsp::Window::kHann : dsp::Window::kRectangular));
        },
        py::arg("batch"), py::arg("sample_rate"), py::arg("hann") = false,
        "Averaged one-sided PSD over rows; returns (freqs, power).");

  m.def("sample",
        [](const std::string& kind, std::vector<double> sigma, int rollouts, int horizon,
           std::uint64_t seed, double control_rate_hz, double fc_hz, int order, double beta) {
          Rng rng(seed);
          const auto spec = make_spec(kind, std::move(sigma), control_rate_hz, fc_hz, order, beta);
          return batch_array(sampling::sample(rng, spec, rollouts, horizon));
        },
        py::arg("kind"), py::arg("sigma"), py::arg("rollouts"), py::arg("horizon"),
        py::arg("seed") = 0, py::arg("control_rate_hz") = 20.0, py::arg("fc_hz") = 1.0,
        py::arg("order") = 2, py::arg("beta") = 1.0,
        "Perturbation batch of shape (rollouts, horizon, dims).");

  m.def("compute_weights",
        [](std::vector<double> costs, double lambda) {
          return py::array(py::cast(mpc::compute_weights(costs, lambda).values));
        },
        py::arg("costs"), py::arg("lam"));

  m.def("mssd", &metrics::mssd, py::arg("signal"));
  m.def("msgfd", &metrics::msgfd, py::arg("signal"), py::arg("window") = 11,
        py::arg("polyorder") = 3);
  m.def("racing_cost", &env::racing_cost, py::arg("v_f"), py::arg("n"), py::arg("alpha"),
        py::arg("yaw"), py::arg("track_yaw"), py::arg("track_width"));

  m.def("config_from_yaml",
        [](const std::string& text) { return bench::dump_config(bench::parse_config(text)); },
        py::arg("text"), "Validates a YAML config and returns it with defaults filled in.");
  m.def("run_episode",
        [](const std::string& yaml, std::uint64_t seed, std::size_t controller) {
          const auto cfg = bench::parse_config(yaml);
          metrics::EpisodeResult r;
          {
            py::gil_scoped_release release;
            r = bench::run_episode(cfg, seed, controller);
          }
          return episode_dict(r);
        },
        py::arg("config_yaml"), py::arg("seed") = 0, py::arg("controller") = 0,
        "Closed-loop episode; returns a dict of numpy arrays.");
  m.def("run_sweep",
        [](const std::string& yaml, const std::filesystem::path& out) {
          const auto cfg = bench::parse_config(yaml);
          py::gil_scoped_release release;
          bench::write_sweep(bench::run_sweep(cfg), cfg, out);
        },
        py::arg("config_yaml"), py::arg("output_dir"),
        "Runs the sweep grid and writes its CSVs to output_dir.");
  m.def("fit_lowpass_spectrum",
        [](std::vector<double> freqs, std::vector<double> power, std::vector<double> cutoffs,
           std::vector<int> orders, double control_rate_hz, int realizations) {
          bench::SpectrumFitGrid grid;
          grid.cutoffs_hz = std::move(cutoffs);
          grid.orders = std::move(orders);
          grid.control_rate_hz = control_rate_hz;
          grid.realizations = realizations;
          const auto fit = bench::fit_sampler_spectrum(
              {std::move(freqs), std::move(power)}, sampling::NoiseKind::kLowpass, grid);
          return py::make_tuple(fit.spec.fc_hz, fit.spec.order, fit.error);
        },
        py::arg("freqs"), py::arg("power"), py::arg("cutoffs_hz"), py::arg("orders"),
        py::arg("control_rate_hz") = 20.0, py::arg("realizations") = 100,
        "Grid fit of the low-pass sampler to a PSD; returns (fc_hz, order, error).");
}
