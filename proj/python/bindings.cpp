#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <filesystem>

#include "bwspdc/config.hpp"
#include "bwspdc/constants.hpp"
#include "bwspdc/error.hpp"
#include "bwspdc/report.hpp"

namespace py = pybind11;
using namespace bwspdc;

namespace {

Scenario load_scenario(const std::string& path) {
  auto cfg = load_config_file(path);
  auto dir = std::filesystem::path(path).parent_path().string();
  return build_scenario(cfg, dir.empty() ? "." : dir);
}

py::dict report_dict(const Scenario& s) {
  auto r = compute_report(s);
  double twopi = 2.0 * pi;
  py::dict d;
  d["poling_period_um"] = r.poling_period / units::um;
  d["center_wavelength_nm"] = twopi * c_light / r.omega_center / units::nm;
  d["gain_linewidth_rad_s"] = r.gain_linewidth;
  d["gain_linewidth_forward_rad_s"] = r.gain_linewidth_forward;
  d["gain_ratio"] = r.gain_ratio;
  d["cluster_spacing_rad_s"] = r.cluster_spacing;
  d["cluster_margin"] = r.cluster_margin;
  d["single_mode"] = r.single_mode;
  d["spacing_signal_rad_s"] = r.rates.spacing_signal;
  d["spacing_idler_rad_s"] = r.rates.spacing_idler;
  d["Gamma_signal_rad_s"] = r.rates.Gamma_signal;
  d["Gamma_idler_rad_s"] = r.rates.Gamma_idler;
  d["finesse_signal"] = r.rates.finesse_signal;
  d["finesse_idler"] = r.rates.finesse_idler;
  d["mode_index_signal"] = r.mode_pair.index_signal;
  d["mode_index_idler"] = r.mode_pair.index_idler;
  d["kappa1_rad_s"] = std::abs(r.kappa1);
  d["small_gain_ratio"] = r.small_gain_ratio;
  d["biphoton_linewidth_rad_s"] = r.biphoton_linewidth;
  d["biphoton_linewidth_scanned_rad_s"] = r.biphoton_linewidth_scanned;
  d["pair_rate_hz"] = r.pair_rate;
  d["coherence_time_ns"] = r.coherence_time / units::ns;
  d["brightness_per_mhz"] = r.brightness.per_mhz;
  d["brightness_per_mhz_per_mw"] = r.brightness.per_mhz_per_mw;
  d["forward_kappa_per_m"] = r.forward_kappa;
  d["forward_rate_hz"] = r.forward_rate;
  d["enhancement_ratio"] = r.enhancement_ratio;
  d["gain_warning"] = r.gain_warning;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "cavity-resonated backward-wave biphoton source calculator";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      std::string msg =
          std::string(to_string(e.category())) + ": " + e.what();
      PyErr_SetString(PyExc_ValueError, msg.c_str());
    }
  });

  py::class_<Scenario>(m, "Scenario")
      .def_property_readonly(
          "poling_period",
          [](const Scenario& s) { return s.crystal.poling_period; })
      .def_property_readonly(
          "omega_pump", [](const Scenario& s) { return s.omega_pump; })
      .def_property_readonly(
          "omega_center", [](const Scenario& s) { return s.omega_center; })
      .def_property_readonly(
          "Gamma_signal",
          [](const Scenario& s) { return s.rates.Gamma_signal; })
      .def_property_readonly(
          "Gamma_idler",
          [](const Scenario& s) { return s.rates.Gamma_idler; })
      .def_property_readonly(
          "kappa1", [](const Scenario& s) { return scenario_kappa1(s); })
      .def_property_readonly("config_hash", [](const Scenario& s) {
        return config_hash_hex(s.config.echo);
      });

  m.def("load_scenario", &load_scenario, py::arg("config_path"),
        "Parse a JSON config and derive the operating point.");

  m.def("report", &report_dict, py::arg("scenario"),
        "All scalar figures of merit as a dict.");

  m.def(
      "spectrum",
      [](const Scenario& s) {
        auto grid = spectrum_grid(s);
        auto coeffs = paired_coefficients(s.rates, scenario_kappa1(s),
                                          s.mode_pair, s.omega_pump, grid);
        auto sp = biphoton_spectrum(coeffs);
        return py::make_tuple(grid, sp.S);
      },
      py::arg("scenario"),
      "Signal-frequency grid and biphoton spectral density.");

  m.def(
      "g2_curve",
      [](const Scenario& s, bool accidentals) {
        auto taus = tau_grid(s);
        auto g = g2_closed(s.rates, std::abs(scenario_kappa1(s)), taus,
                           accidentals);
        return py::make_tuple(taus, g.G2);
      },
      py::arg("scenario"), py::arg("accidentals") = true,
      "Delay grid and Glauber correlation.");

  m.def(
      "generate_events",
      [](const Scenario& s, double duration, std::uint64_t seed,
         double rate) {
        double r = rate > 0.0
                       ? rate
                       : pair_rate(s.rates, std::abs(scenario_kappa1(s)));
        auto gen = generate(r, s.rates.Gamma_signal, s.rates.Gamma_idler,
                            duration, seed);
        py::list out;
        for (const auto& e : gen.stream.events)
          out.append(py::make_tuple(
              e.time, e.channel == Channel::Signal ? "S" : "I"));
        return out;
      },
      py::arg("scenario"), py::arg("duration"), py::arg("seed"),
      py::arg("rate") = 0.0,
      "Simulated detection stream as (time, channel) tuples.");

  m.def("spectrum_fwhm", &spectrum_fwhm, py::arg("Gamma_signal"),
        py::arg("Gamma_idler"),
        "FWHM of the doubly resonant biphoton spectrum.");
}
