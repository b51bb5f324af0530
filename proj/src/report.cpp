#include "bwspdc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "bwspdc/constants.hpp"
#include "bwspdc/error.hpp"

namespace bwspdc {

namespace {

std::string sci(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.12e", v);
  return b;
}

std::string fixed12(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.12f", v);
  return b;
}

std::string g6(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.6g", v);
  return b;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCategory::IoError, "cannot write " + path);
  return out;
}

}  // namespace

std::vector<double> spectrum_grid(const Scenario& s) {
  double width = spectrum_fwhm(s.rates.Gamma_signal, s.rates.Gamma_idler);
  double half = s.config.grids.spectrum_halfwidth * width;
  int n = s.config.grids.spectrum_points;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n));
  double center = s.mode_pair.Omega_signal;
  for (int j = 0; j < n; ++j)
    grid.push_back(center - half +
                   2.0 * half * static_cast<double>(j) /
                       static_cast<double>(n - 1));
  return grid;
}

std::vector<double> tau_grid(const Scenario& s) {
  double tc = std::log(2.0) *
              (1.0 / s.rates.Gamma_signal + 1.0 / s.rates.Gamma_idler);
  double half = s.config.grids.g2_halfwidth * tc;
  int n = s.config.grids.g2_points;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    grid.push_back(-half + 2.0 * half * static_cast<double>(j) /
                              static_cast<double>(n - 1));
  return grid;
}

ReportScalars compute_report(const Scenario& s) {
  ReportScalars r;
  r.poling_period = s.crystal.poling_period;
  r.omega_pump = s.omega_pump;
  r.omega_center = s.omega_center;
  r.gain_linewidth = gain_linewidth(s.crystal, s.omega_pump, s.omega_center);
  CrystalSpec forward = s.crystal;
  forward.geometry = Geometry::Forward;
  r.gain_linewidth_forward =
      gain_linewidth(forward, s.omega_pump, s.omega_center);
  r.gain_ratio = r.gain_linewidth_forward / r.gain_linewidth;

  auto cluster = cluster_spacing(s.crystal, s.omega_pump, s.omega_center);
  r.cluster_spacing = cluster.spacing;
  auto smc = single_mode_check(cluster.spacing, r.gain_linewidth);
  r.cluster_margin = smc.margin;
  r.single_mode = smc.single_mode;

  r.rates = s.rates;
  r.mode_pair = s.mode_pair;
  r.kappa1 = scenario_kappa1(s);
  double mag = std::abs(r.kappa1);
  r.small_gain_ratio =
      mag / (std::sqrt(s.rates.Gamma_signal * s.rates.Gamma_idler) / 2.0);

  r.biphoton_linewidth =
      spectrum_fwhm(s.rates.Gamma_signal, s.rates.Gamma_idler);
  auto coeffs = paired_coefficients(s.rates, r.kappa1, s.mode_pair,
                                    s.omega_pump, spectrum_grid(s));
  auto spec = biphoton_spectrum(coeffs);
  r.biphoton_linewidth_scanned = spec.linewidth_scanned;
  r.gain_warning = coeffs.gain_warning;

  r.pair_rate = pair_rate(s.rates, mag);
  r.coherence_time = std::log(2.0) * (1.0 / s.rates.Gamma_signal +
                                      1.0 / s.rates.Gamma_idler);
  r.brightness =
      brightness(r.pair_rate, r.biphoton_linewidth, s.config.pump_power);

  auto vg = [&](Axis axis, double omega) {
    return dispersion_sample(model_for_axis(s.crystal.dispersion, axis),
                             omega)
        .group_velocity;
  };
  double vs = vg(s.crystal.signal_axis, s.omega_center);
  double vi = vg(s.crystal.idler_axis, s.omega_pump - s.omega_center);
  r.forward_kappa = freespace_kappa_from_kappa1(
      mag, vs, vi, s.config.eta_signal, s.config.eta_idler);
  r.forward_rate =
      freespace_rate(forward, r.forward_kappa, s.omega_pump, s.omega_center);
  r.enhancement_ratio = resonant_vs_forward_ratio(
      {r.pair_rate, r.biphoton_linewidth, s.config.pump_power},
      {r.forward_rate, r.gain_linewidth_forward, s.config.pump_power});
  return r;
}

void write_scalar_report(std::ostream& out, const ReportScalars& r,
                         const std::string& hash) {
  auto line = [&](const char* name, const std::string& value) {
    char b[128];
    std::snprintf(b, sizeof b, "  %-28s %s\n", name, value.c_str());
    out << b;
  };
  double twopi = 2.0 * pi;
  out << "biphoton source report  (config " << hash << ")\n";
  out << "crystal\n";
  line("pump wavelength", g6(twopi * c_light / r.omega_pump / units::nm) + " nm");
  line("center wavelength", g6(twopi * c_light / r.omega_center / units::nm) + " nm");
  line("poling period", g6(r.poling_period / units::um) + " um");
  line("gain linewidth", g6(r.gain_linewidth / twopi / 1e9) + " GHz (2pi)");
  line("forward gain linewidth", g6(r.gain_linewidth_forward / twopi / 1e9) + " GHz (2pi)");
  line("forward/backward ratio", g6(r.gain_ratio));
  out << "cavity\n";
  line("FSR signal", g6(r.rates.spacing_signal / twopi / 1e9) + " GHz (2pi)");
  line("FSR idler", g6(r.rates.spacing_idler / twopi / 1e9) + " GHz (2pi)");
  line("Gamma signal", g6(r.rates.Gamma_signal / twopi / 1e6) + " MHz (2pi)");
  line("Gamma idler", g6(r.rates.Gamma_idler / twopi / 1e6) + " MHz (2pi)");
  line("finesse signal", g6(r.rates.finesse_signal));
  line("finesse idler", g6(r.rates.finesse_idler));
  line("cluster spacing", g6(r.cluster_spacing / twopi / 1e9) + " GHz (2pi)");
  line("single-mode margin", g6(r.cluster_margin));
  line("single-mode", r.single_mode ? "yes" : "no");
  line("signal mode index", std::to_string(r.mode_pair.index_signal));
  line("idler mode index", std::to_string(r.mode_pair.index_idler));
  line("signal comb offset", g6(r.mode_pair.comb_offset_signal / twopi) + " Hz");
  line("idler comb offset", g6(r.mode_pair.comb_offset_idler / twopi) + " Hz");
  out << "biphotons\n";
  line("kappa1", g6(std::abs(r.kappa1)) + " rad/s");
  line("small-gain ratio", g6(r.small_gain_ratio) +
                               (r.gain_warning ? "  ** above low-gain regime" : ""));
  line("linewidth", g6(r.biphoton_linewidth / twopi / 1e6) + " MHz (2pi)");
  line("linewidth (scanned)", g6(r.biphoton_linewidth_scanned / twopi / 1e6) + " MHz (2pi)");
  line("pair rate", g6(r.pair_rate) + " 1/s");
  line("coherence time", g6(r.coherence_time / units::ns) + " ns");
  line("brightness", g6(r.brightness.per_mhz) + " 1/(s MHz)");
  line("brightness per mW", g6(r.brightness.per_mhz_per_mw) + " 1/(s MHz mW)");
  out << "forward reference\n";
  line("coupling", g6(r.forward_kappa) + " 1/m");
  line("pair rate", g6(r.forward_rate) + " 1/s");
  line("enhancement ratio", g6(r.enhancement_ratio));
}

void write_spectrum_csv(const std::string& path,
                        const std::vector<double>& omega, double omega_ref,
                        const std::vector<double>& s,
                        const std::string& hash) {
  auto out = open_out(path);
  out << "# config " << hash << "\n";
  out << "omega_rad_s,detuning_rad_s,S\n";
  for (std::size_t j = 0; j < omega.size(); ++j)
    out << sci(omega[j]) << ',' << sci(omega[j] - omega_ref) << ','
        << sci(s[j]) << "\n";
}

void write_g2_csv(const std::string& path, const std::vector<double>& tau,
                  const std::vector<double>& g2, double accidental_level,
                  const std::string& hash) {
  auto out = open_out(path);
  out << "# config " << hash << "\n";
  out << "tau_ns,G2,normalized\n";
  for (std::size_t j = 0; j < tau.size(); ++j) {
    double norm = accidental_level > 0.0 ? g2[j] / accidental_level : 0.0;
    char b[40];
    std::snprintf(b, sizeof b, "%.6f", tau[j] / units::ns);
    out << b << ',' << sci(g2[j]) << ',' << sci(norm) << "\n";
  }
}

void write_events_csv(const std::string& path, const EventStream& stream,
                      const std::string& hash) {
  auto out = open_out(path);
  out << "# config " << hash << "\n";
  out << "time_s,channel\n";
  for (const auto& e : stream.events)
    out << fixed12(e.time) << ','
        << (e.channel == Channel::Signal ? 'S' : 'I') << "\n";
}

void write_histogram_csv(const std::string& path,
                         const CoincidenceHistogram& hist,
                         const std::string& hash) {
  auto out = open_out(path);
  out << "# config " << hash << "\n";
  out << "tau_s,count\n";
  for (std::size_t j = 0; j < hist.counts.size(); ++j) {
    double center = 0.5 * (hist.edges[j] + hist.edges[j + 1]);
    out << sci(center) << ',' << hist.counts[j] << "\n";
  }
}

void write_trace_csv(const std::string& path,
                     const std::vector<TracePoint>& trace,
                     const std::string& hash) {
  auto out = open_out(path);
  out << "# config " << hash << "\n";
  out << "t_s,abs_signal,abs_idler\n";
  for (const auto& p : trace)
    out << sci(p.t) << ',' << sci(p.abs_signal) << ',' << sci(p.abs_idler)
        << "\n";
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#8c564b"};

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '&')
      out += "&amp;";
    else if (ch == '<')
      out += "&lt;";
    else if (ch == '>')
      out += "&gt;";
    else
      out += ch;
  }
  return out;
}

std::vector<double> nice_ticks(double lo, double hi) {
  double range = hi - lo;
  if (!(range > 0.0)) return {lo};
  double raw = range / 4.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double norm = raw / mag;
  double step = (norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0
                                                                  : 10.0) *
                mag;
  std::vector<double> ticks;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * range;
       v += step)
    ticks.push_back(std::abs(v) < 1e-12 * range ? 0.0 : v);
  return ticks;
}

std::string coord(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2f", v);
  return b;
}

}  // namespace

void write_svg_grid(const std::string& path, const std::string& title,
                    const std::vector<PlotPanel>& panels) {
  const double pw = 580.0, ph = 380.0;
  int cols = panels.size() > 1 ? 2 : 1;
  int rows = (static_cast<int>(panels.size()) + cols - 1) / cols;
  double width = 20.0 + pw * cols + 20.0 * (cols - 1);
  double height = 50.0 + ph * rows + 20.0 * (rows - 1);

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << coord(width / 2.0)
      << "\" y=\"28\" font-family=\"monospace\" font-size=\"16\" "
         "text-anchor=\"middle\">"
      << escape_xml(title) << "</text>\n";

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const auto& panel = panels[p];
    double px = 20.0 + (pw + 20.0) * static_cast<double>(p % cols);
    double py = 44.0 + (ph + 20.0) * static_cast<double>(p / cols);
    double x0 = px + 76.0, x1 = px + pw - 16.0;
    double y0 = py + 30.0, y1 = py + ph - 56.0;

    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    bool have = false;
    for (const auto& s : panel.series)
      for (std::size_t j = 0; j < s.x.size() && j < s.y.size(); ++j) {
        if (!std::isfinite(s.x[j]) || !std::isfinite(s.y[j])) continue;
        if (!have) {
          xmin = xmax = s.x[j];
          ymin = ymax = s.y[j];
          have = true;
        } else {
          xmin = std::min(xmin, s.x[j]);
          xmax = std::max(xmax, s.x[j]);
          ymin = std::min(ymin, s.y[j]);
          ymax = std::max(ymax, s.y[j]);
        }
      }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;
    double ypad = 0.04 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto sx = [&](double v) {
      return x0 + (v - xmin) / (xmax - xmin) * (x1 - x0);
    };
    auto sy = [&](double v) {
      return y1 - (v - ymin) / (ymax - ymin) * (y1 - y0);
    };

    out << "<text x=\"" << coord((x0 + x1) / 2.0) << "\" y=\""
        << coord(py + 18.0)
        << "\" font-family=\"monospace\" font-size=\"13\" "
           "text-anchor=\"middle\">"
        << escape_xml(panel.title) << "</text>\n";
    out << "<rect x=\"" << coord(x0) << "\" y=\"" << coord(y0)
        << "\" width=\"" << coord(x1 - x0) << "\" height=\"" << coord(y1 - y0)
        << "\" fill=\"none\" stroke=\"#333333\"/>\n";

    for (double t : nice_ticks(xmin, xmax)) {
      double x = sx(t);
      out << "<line x1=\"" << coord(x) << "\" y1=\"" << coord(y1)
          << "\" x2=\"" << coord(x) << "\" y2=\"" << coord(y1 + 5.0)
          << "\" stroke=\"#333333\"/>\n";
      out << "<text x=\"" << coord(x) << "\" y=\"" << coord(y1 + 18.0)
          << "\" font-family=\"monospace\" font-size=\"11\" "
             "text-anchor=\"middle\">"
          << g6(t) << "</text>\n";
    }
    for (double t : nice_ticks(ymin, ymax)) {
      double y = sy(t);
      out << "<line x1=\"" << coord(x0 - 5.0) << "\" y1=\"" << coord(y)
          << "\" x2=\"" << coord(x0) << "\" y2=\"" << coord(y)
          << "\" stroke=\"#333333\"/>\n";
      out << "<text x=\"" << coord(x0 - 8.0) << "\" y=\"" << coord(y + 4.0)
          << "\" font-family=\"monospace\" font-size=\"11\" "
             "text-anchor=\"end\">"
          << g6(t) << "</text>\n";
    }
    out << "<text x=\"" << coord((x0 + x1) / 2.0) << "\" y=\""
        << coord(y1 + 36.0)
        << "\" font-family=\"monospace\" font-size=\"12\" "
           "text-anchor=\"middle\">"
        << escape_xml(panel.xlabel) << "</text>\n";
    out << "<text x=\"" << coord(px + 16.0) << "\" y=\""
        << coord((y0 + y1) / 2.0)
        << "\" font-family=\"monospace\" font-size=\"12\" "
           "text-anchor=\"middle\" transform=\"rotate(-90 "
        << coord(px + 16.0) << " " << coord((y0 + y1) / 2.0) << ")\">"
        << escape_xml(panel.ylabel) << "</text>\n";

    for (std::size_t k = 0; k < panel.series.size(); ++k) {
      const auto& s = panel.series[k];
      std::string color =
          s.color.empty() ? kPalette[k % 5] : s.color;
      out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t j = 0; j < s.x.size() && j < s.y.size(); ++j) {
        if (!std::isfinite(s.x[j]) || !std::isfinite(s.y[j])) continue;
        out << coord(sx(s.x[j])) << ',' << coord(sy(s.y[j])) << ' ';
      }
      out << "\"/>\n";
      if (!s.label.empty()) {
        double lx = x1 - 150.0, ly = y0 + 16.0 + 16.0 * static_cast<double>(k);
        out << "<rect x=\"" << coord(lx) << "\" y=\"" << coord(ly - 9.0)
            << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
        out << "<text x=\"" << coord(lx + 16.0) << "\" y=\"" << coord(ly)
            << "\" font-family=\"monospace\" font-size=\"11\">"
            << escape_xml(s.label) << "</text>\n";
      }
    }
  }
  out << "</svg>\n";
}

}  // namespace bwspdc
