#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bwspdc/config.hpp"
#include "bwspdc/constants.hpp"
#include "bwspdc/error.hpp"
#include "bwspdc/numerics.hpp"
#include "bwspdc/report.hpp"

namespace {

using namespace bwspdc;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, CommonArgs& a) {
  sub->add_option("--config", a.config_path, "JSON config file");
  sub->add_option("--out", a.out_dir, "output directory (overrides config)");
  sub->add_option("--override", a.overrides,
                  "section.key=value applied before parsing (repeatable)");
}

struct Loaded {
  SourceConfig cfg;
  std::string base_dir = ".";
  std::string hash;
};

Loaded load(const CommonArgs& a) {
  nlohmann::json j = a.config_path.empty() ? nlohmann::json::object()
                                           : load_json_file(a.config_path);
  for (const auto& o : a.overrides) apply_override(j, o);
  Loaded l;
  l.cfg = parse_config(j);
  if (!a.out_dir.empty()) l.cfg.output.directory = a.out_dir;
  if (!a.config_path.empty()) {
    auto dir = std::filesystem::path(a.config_path).parent_path();
    if (!dir.empty()) l.base_dir = dir.string();
  }
  l.hash = config_hash_hex(l.cfg.echo);
  return l;
}

std::string ensure_outdir(const SourceConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output.directory, ec);
  if (ec)
    fail(ErrorCategory::IoError,
         "cannot create output directory " + cfg.output.directory);
  return cfg.output.directory;
}

void warn(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }

void say(const char* name, const std::string& value) {
  char b[160];
  std::snprintf(b, sizeof b, "  %-28s %s\n", name, value.c_str());
  std::cout << b;
}

std::string g6(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.6g", v);
  return b;
}

constexpr double twopi = 2.0 * pi;

// ---------------------------------------------------------------- verify

void run_verify(const Scenario& s) {
  const auto& r = s.rates;
  const std::complex<double> i1(0.0, 1.0);
  double gs = r.gamma_signal, gi = r.gamma_idler;
  double hs = r.Gamma_signal / 2.0, hi = r.Gamma_idler / 2.0;
  double root_gg = std::sqrt(gs * gi);
  // Probe coupling small enough that the first-order transfer
  // coefficients are exact to well below the tolerance.
  std::complex<double> kappa1 =
      3e-4 * std::sqrt(r.Gamma_signal * r.Gamma_idler) / 2.0;

  double worst_ode = 0.0;
  for (int j = -2; j <= 2; ++j) {
    double d = 0.75 * static_cast<double>(j) * r.Gamma_signal;
    std::complex<double> ps = hs - i1 * d, pi_ = hi - i1 * d;
    std::complex<double> a1 = (gs - ps) / ps;
    std::complex<double> b1 = -i1 * kappa1 * root_gg / (ps * pi_);
    std::complex<double> c1 = -b1;
    std::complex<double> d1 = (gi - pi_) / pi_;

    SeededRun seed_s;
    seed_s.detuning = d;
    seed_s.seed_signal = 1.0;
    auto ts = cavity_transfer_oracle(r, kappa1, seed_s);
    SeededRun seed_i;
    seed_i.detuning = d;
    seed_i.seed_idler = 1.0;
    auto ti = cavity_transfer_oracle(r, kappa1, seed_i);

    auto dev = [](std::complex<double> got, std::complex<double> want) {
      return std::abs(got - want) / std::max(std::abs(want), 0.1);
    };
    worst_ode = std::max({worst_ode, dev(ts.out_signal, a1),
                          dev(ts.out_idler, c1), dev(ti.out_signal, b1),
                          dev(ti.out_idler, d1)});
  }
  char line1[120];
  std::snprintf(line1, sizeof line1,
                "verify: cavity transfer max deviation %.3e (tol 1e-06)",
                worst_ode);
  std::cout << line1 << (worst_ode <= 1e-6 ? " ok" : " FAILED") << "\n";

  double l = s.crystal.length;
  double kappa = 1e-4 / l;
  double ks = crystal_wavevector(s.crystal, s.crystal.signal_axis,
                                 s.omega_center);
  double ki = crystal_wavevector(s.crystal, s.crystal.idler_axis,
                                 s.omega_pump - s.omega_center);
  double worst_bvp = 0.0;
  for (double dk : {0.0, twopi / l, 10.0 / l}) {
    auto map = spatial_coupling_oracle(kappa, dk, l, ks, ki);
    auto want = freespace_point(kappa, dk, l, ks, ki);
    auto dev = [&](std::complex<double> got, std::complex<double> w) {
      return std::abs(got - w) / std::max(std::abs(w), kappa * l);
    };
    worst_bvp = std::max({worst_bvp, dev(map.A, want.A), dev(map.B, want.B),
                          dev(map.C, want.C), dev(map.D, want.D)});
  }
  char line2[120];
  std::snprintf(line2, sizeof line2,
                "verify: spatial map max deviation %.3e (tol 1e-08)",
                worst_bvp);
  std::cout << line2 << (worst_bvp <= 1e-8 ? " ok" : " FAILED") << "\n";

  if (worst_ode > 1e-6 || worst_bvp > 1e-8)
    fail(ErrorCategory::NotConverged,
         "closed forms disagree with the numerical oracles");
}

// ------------------------------------------------------------ subcommands

int cmd_dispersion(const CommonArgs& a) {
  auto l = load(a);
  auto s = build_scenario(l.cfg, l.base_dir);
  std::cout << "dispersion  (config " << l.hash << ")\n";
  char b[200];
  std::snprintf(b, sizeof b, "  %-8s %-12s %-10s %-10s %-14s\n", "band",
                "lambda_nm", "n", "n_group", "v_g_m_s");
  std::cout << b;
  auto row = [&](const char* band, Axis axis, double omega) {
    auto d = dispersion_sample(model_for_axis(s.crystal.dispersion, axis),
                               omega);
    std::snprintf(b, sizeof b, "  %-8s %-12.4f %-10.6f %-10.6f %-14.6e\n",
                  band, twopi * c_light / omega / units::nm, d.n,
                  d.group_index, d.group_velocity);
    std::cout << b;
  };
  row("pump", s.crystal.pump_axis, s.omega_pump);
  row("signal", s.crystal.signal_axis, s.omega_center);
  row("idler", s.crystal.idler_axis, s.omega_pump - s.omega_center);

  const auto& y = model_for_axis(s.crystal.dispersion, Axis::Y);
  const auto& z = model_for_axis(s.crystal.dispersion, Axis::Z);
  double lo = std::max(y.range_lo_um, z.range_lo_um) * 1.001;
  double hi = std::min(y.range_hi_um, z.range_hi_um) * 0.999;
  std::vector<double> lam, ny, nz;
  for (int j = 0; j < 240; ++j) {
    double lum = lo + (hi - lo) * j / 239.0;
    double w = omega_from_wavelength(lum * units::um);
    lam.push_back(lum);
    ny.push_back(refractive_index(y, w));
    nz.push_back(refractive_index(z, w));
  }
  if (l.cfg.output.csv || l.cfg.output.svg) {
    std::string dir = ensure_outdir(l.cfg);
    if (l.cfg.output.csv) {
      std::ofstream out(dir + "/dispersion.csv");
      if (!out) fail(ErrorCategory::IoError, "cannot write dispersion.csv");
      out << "# config " << l.hash << "\n";
      out << "lambda_um,n_y,n_z\n";
      for (std::size_t j = 0; j < lam.size(); ++j) {
        std::snprintf(b, sizeof b, "%.6f,%.9f,%.9f\n", lam[j], ny[j], nz[j]);
        out << b;
      }
      std::cout << "wrote " << dir << "/dispersion.csv\n";
    }
    if (l.cfg.output.svg) {
      PlotPanel panel{"refractive index", "wavelength (um)", "n",
                      {{"n_y", lam, ny, ""}, {"n_z", lam, nz, ""}}};
      write_svg_grid(dir + "/dispersion.svg", "dispersion", {panel});
      std::cout << "wrote " << dir << "/dispersion.svg\n";
    }
  }
  return 0;
}

int cmd_design(const CommonArgs& a) {
  auto l = load(a);
  auto s = build_scenario(l.cfg, l.base_dir);
  double lw = gain_linewidth(s.crystal, s.omega_pump, s.omega_center);
  double lw_scan =
      gain_linewidth_scanned(s.crystal, s.omega_pump, s.omega_center);
  CrystalSpec fwd = s.crystal;
  fwd.geometry = Geometry::Forward;
  double lw_fwd = gain_linewidth(fwd, s.omega_pump, s.omega_center);
  auto cluster = cluster_spacing(s.crystal, s.omega_pump, s.omega_center);
  auto smc = single_mode_check(cluster.spacing, lw);

  std::cout << "design  (config " << l.hash << ")\n";
  say("poling period", g6(s.crystal.poling_period / units::um) + " um");
  say("grating order", std::to_string(s.crystal.qpm_order));
  say("center wavelength",
      g6(twopi * c_light / s.omega_center / units::nm) + " nm");
  say("gain linewidth", g6(lw / twopi / 1e9) + " GHz (2pi)");
  say("gain linewidth (scanned)", g6(lw_scan / twopi / 1e9) + " GHz (2pi)");
  say("forward gain linewidth", g6(lw_fwd / twopi / 1e9) + " GHz (2pi)");
  say("forward/backward ratio", g6(lw_fwd / lw));
  say("cluster spacing", g6(cluster.spacing / twopi / 1e9) + " GHz (2pi)");
  say("cluster spacing",
      g6(cluster.spacing / (twopi * c_light * 100.0)) + " 1/cm");
  say("single-mode margin", g6(smc.margin));
  say("single-mode", smc.single_mode ? "yes" : "no");
  return 0;
}

int cmd_cavity(const CommonArgs& a) {
  auto l = load(a);
  auto s = build_scenario(l.cfg, l.base_dir);
  const auto& r = s.rates;
  std::cout << "cavity  (config " << l.hash << ")\n";
  say("FSR signal", g6(r.spacing_signal / twopi / 1e9) + " GHz (2pi)");
  say("FSR idler", g6(r.spacing_idler / twopi / 1e9) + " GHz (2pi)");
  say("gamma signal", g6(r.gamma_signal / twopi / 1e6) + " MHz (2pi)");
  say("gamma idler", g6(r.gamma_idler / twopi / 1e6) + " MHz (2pi)");
  say("Gamma signal", g6(r.Gamma_signal / twopi / 1e6) + " MHz (2pi)");
  say("Gamma idler", g6(r.Gamma_idler / twopi / 1e6) + " MHz (2pi)");
  say("finesse signal", g6(r.finesse_signal));
  say("finesse idler", g6(r.finesse_idler));
  say("signal mode index", std::to_string(s.mode_pair.index_signal));
  say("idler mode index", std::to_string(s.mode_pair.index_idler));
  say("signal comb offset",
      g6(s.mode_pair.comb_offset_signal / twopi) + " Hz");
  say("idler comb offset", g6(s.mode_pair.comb_offset_idler / twopi) + " Hz");
  say("mismatch at lock", g6(s.delta_k_prime) + " 1/m");
  return 0;
}

int cmd_freespace(const CommonArgs& a, double kappa_arg) {
  auto l = load(a);
  auto s = build_scenario(l.cfg, l.base_dir);
  double kappa = kappa_arg;
  if (!(kappa > 0.0)) {
    auto k1 = scenario_kappa1(s);
    auto vg = [&](Axis axis, double omega) {
      return dispersion_sample(model_for_axis(s.crystal.dispersion, axis),
                               omega)
          .group_velocity;
    };
    kappa = freespace_kappa_from_kappa1(
        std::abs(k1), vg(s.crystal.signal_axis, s.omega_center),
        vg(s.crystal.idler_axis, s.omega_pump - s.omega_center),
        l.cfg.eta_signal, l.cfg.eta_idler);
  }
  double lw = gain_linewidth(s.crystal, s.omega_pump, s.omega_center);
  double lw_scan =
      gain_linewidth_scanned(s.crystal, s.omega_pump, s.omega_center);
  int n = l.cfg.grids.spectrum_points;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    grid.push_back(s.omega_center + (-3.0 + 6.0 * j / (n - 1.0)) * lw);
  auto spec = freespace_spectrum(s.crystal, kappa, grid, s.omega_pump);
  auto coeffs = freespace_coefficients(s.crystal, kappa, {s.omega_center},
                                       s.omega_pump);
  if (coeffs.gain_warning)
    warn("parametric gain kappa*L = " + g6(kappa * s.crystal.length) +
         " is outside the low-gain regime");
  double rate = freespace_rate(s.crystal, kappa, s.omega_pump,
                               s.omega_center);

  std::cout << "freespace  (config " << l.hash << ")\n";
  say("kappa", g6(kappa) + " 1/m");
  say("kappa*L", g6(kappa * s.crystal.length));
  say("gain linewidth", g6(lw / twopi / 1e9) + " GHz (2pi)");
  say("gain linewidth (scanned)", g6(lw_scan / twopi / 1e9) + " GHz (2pi)");
  say("pair rate", g6(rate) + " 1/s");

  if (l.cfg.output.csv || l.cfg.output.svg) {
    std::string dir = ensure_outdir(l.cfg);
    if (l.cfg.output.csv) {
      write_spectrum_csv(dir + "/freespace.csv", grid, s.omega_center, spec,
                         l.hash);
      std::cout << "wrote " << dir << "/freespace.csv\n";
    }
    if (l.cfg.output.svg) {
      std::vector<double> det;
      det.reserve(grid.size());
      for (double w : grid) det.push_back((w - s.omega_center) / twopi / 1e9);
      PlotPanel panel{"free-space spectral density", "detuning (GHz)",
                      "S (1/(s rad/s))",
                      {{"", det, spec, ""}}};
      write_svg_grid(dir + "/freespace.svg", "freespace", {panel});
      std::cout << "wrote " << dir << "/freespace.svg\n";
    }
  }
  return 0;
}

int cmd_biphoton(const CommonArgs& a, bool verify) {
  auto l = load(a);
  auto s = build_scenario(l.cfg, l.base_dir);
  auto r = compute_report(s);
  if (r.gain_warning)
    warn("kappa1 is outside the low-gain regime (ratio " +
         g6(r.small_gain_ratio) + ")");
  std::cout << "biphoton  (config " << l.hash << ")\n";
  say("kappa1", g6(std::abs(r.kappa1)) + " rad/s");
  say("small-gain ratio", g6(r.small_gain_ratio));
  say("linewidth", g6(r.biphoton_linewidth / twopi / 1e6) + " MHz (2pi)");
  say("linewidth (scanned)",
      g6(r.biphoton_linewidth_scanned / twopi / 1e6) + " MHz (2pi)");
  say("pair rate", g6(r.pair_rate) + " 1/s");
  say("brightness", g6(r.brightness.per_mhz) + " 1/(s MHz)");
  say("brightness per mW", g6(r.brightness.per_mhz_per_mw) + " 1/(s MHz mW)");

  auto grid = spectrum_grid(s);
  auto coeffs = paired_coefficients(s.rates, r.kappa1, s.mode_pair,
                                    s.omega_pump, grid);
  auto spec = biphoton_spectrum(coeffs);
  if (l.cfg.output.csv || l.cfg.output.svg) {
    std::string dir = ensure_outdir(l.cfg);
    if (l.cfg.output.csv) {
      write_spectrum_csv(dir + "/spectrum.csv", grid,
                         s.mode_pair.Omega_signal, spec.S, l.hash);
      std::cout << "wrote " << dir << "/spectrum.csv\n";
    }
    if (l.cfg.output.svg) {
      std::vector<double> det;
      det.reserve(grid.size());
      for (double w : grid)
        det.push_back((w - s.mode_pair.Omega_signal) / twopi / 1e6);
      PlotPanel panel{"biphoton spectral density", "detuning (MHz)",
                      "S (1/(s rad/s))",
                      {{"", det, spec.S, ""}}};
      write_svg_grid(dir + "/spectrum.svg", "biphoton", {panel});
      std::cout << "wrote " << dir << "/spectrum.svg\n";
    }
  }
  if (verify) run_verify(s);
  return 0;
}

int cmd_g2(const CommonArgs& a, bool no_accidentals) {
  auto l = load(a);
  auto s = build_scenario(l.cfg, l.base_dir);
  auto kappa1 = scenario_kappa1(s);
  auto taus = tau_grid(s);
  auto g2 = g2_closed(s.rates, std::abs(kappa1), taus, !no_accidentals);
  std::cout << "g2  (config " << l.hash << ")\n";
  say("coherence time", g6(g2.coherence_time / units::ns) + " ns");
  say("correlation time (1/e)",
      g6(g2.correlation_time / units::ns) + " ns");
  say("accidental level", g6(g2.accidental_level) + " 1/s^2");
  if (l.cfg.output.csv || l.cfg.output.svg) {
    std::string dir = ensure_outdir(l.cfg);
    if (l.cfg.output.csv) {
      write_g2_csv(dir + "/g2.csv", taus, g2.G2, g2.accidental_level, l.hash);
      std::cout << "wrote " << dir << "/g2.csv\n";
    }
    if (l.cfg.output.svg) {
      std::vector<double> ns;
      ns.reserve(taus.size());
      for (double t : taus) ns.push_back(t / units::ns);
      PlotPanel panel{"time correlation", "delay (ns)", "G2 (1/s^2)",
                      {{"", ns, g2.G2, ""}}};
      write_svg_grid(dir + "/g2.svg", "g2", {panel});
      std::cout << "wrote " << dir << "/g2.svg\n";
    }
  }
  return 0;
}

int cmd_events(const CommonArgs& a, double duration_arg, long long seed_arg,
               double rate_arg) {
  auto l = load(a);
  auto s = build_scenario(l.cfg, l.base_dir);
  double rate;
  if (rate_arg > 0.0)
    rate = rate_arg;
  else if (l.cfg.events.rate_override)
    rate = *l.cfg.events.rate_override;
  else
    rate = pair_rate(s.rates, std::abs(scenario_kappa1(s)));
  double duration =
      duration_arg > 0.0 ? duration_arg : l.cfg.events.duration;
  std::uint64_t seed = seed_arg >= 0 ? static_cast<std::uint64_t>(seed_arg)
                                     : l.cfg.events.seed;

  auto gen = generate(rate, s.rates.Gamma_signal, s.rates.Gamma_idler,
                      duration, seed);
  if (gen.purity_warning)
    warn("pair rate is high enough that accidental coincidences overlap "
         "real pairs");
  auto hist =
      histogram(gen.stream, l.cfg.events.window, l.cfg.events.bin_width);
  auto delays = coincidence_delays(gen.stream, hist.window);

  std::cout << "events  (config " << l.hash << ")\n";
  say("pair rate", g6(rate) + " 1/s");
  say("duration", g6(duration) + " s");
  say("seed", std::to_string(seed));
  say("pairs emitted", std::to_string(gen.pairs_emitted));
  say("pairs recorded", std::to_string(gen.pairs_recorded));
  say("coincidences", std::to_string(delays.size()));
  // Uniform-background coincidences from unrelated pairs dilute the
  // exponential shape; the KS verdict below assumes they are negligible.
  double acc_fraction = rate * 2.0 * hist.window /
                        (1.0 + rate * 2.0 * hist.window);
  say("est. accidental fraction", g6(acc_fraction));
  if (!delays.empty()) {
    double ks = ks_statistic(delays, s.rates.Gamma_signal,
                             s.rates.Gamma_idler, hist.window);
    double crit = ks_critical(delays.size(), 0.01);
    say("KS distance", g6(ks));
    say("KS critical (1%)",
        g6(crit) + (ks <= crit ? "  consistent" : "  inconsistent"));
  } else {
    say("KS distance", "skipped (no coincidences in the window)");
  }
  try {
    auto fit = fit_decay_rates(hist);
    say("fitted Gamma signal",
        g6(fit.Gamma_signal / twopi / 1e6) + " MHz (2pi)");
    say("fitted Gamma idler",
        g6(fit.Gamma_idler / twopi / 1e6) + " MHz (2pi)");
    say("fitted coherence time", g6(fit.coherence_time / units::ns) + " ns");
  } catch (const Error& e) {
    if (e.category() != ErrorCategory::EmptyStream) throw;
    say("decay-rate fit", std::string("skipped: ") + e.what());
  }
  say("model Gamma signal",
      g6(s.rates.Gamma_signal / twopi / 1e6) + " MHz (2pi)");
  say("model Gamma idler",
      g6(s.rates.Gamma_idler / twopi / 1e6) + " MHz (2pi)");

  if (l.cfg.output.csv || l.cfg.output.svg) {
    std::string dir = ensure_outdir(l.cfg);
    if (l.cfg.output.csv) {
      write_events_csv(dir + "/events.csv", gen.stream, l.hash);
      write_histogram_csv(dir + "/histogram.csv", hist, l.hash);
      std::cout << "wrote " << dir << "/events.csv\n";
      std::cout << "wrote " << dir << "/histogram.csv\n";
    }
    if (l.cfg.output.svg) {
      std::vector<double> centers, counts, expected;
      double n = static_cast<double>(delays.size());
      for (std::size_t j = 0; j < hist.counts.size(); ++j) {
        double c = 0.5 * (hist.edges[j] + hist.edges[j + 1]);
        centers.push_back(c / units::ns);
        counts.push_back(static_cast<double>(hist.counts[j]));
        double cdf_hi = delay_cdf(hist.edges[j + 1], s.rates.Gamma_signal,
                                  s.rates.Gamma_idler, hist.window);
        double cdf_lo = delay_cdf(hist.edges[j], s.rates.Gamma_signal,
                                  s.rates.Gamma_idler, hist.window);
        expected.push_back(n * (cdf_hi - cdf_lo));
      }
      PlotPanel panel{"coincidence histogram", "delay (ns)", "counts",
                      {{"data", centers, counts, ""},
                       {"model", centers, expected, ""}}};
      write_svg_grid(dir + "/histogram.svg", "events", {panel});
      std::cout << "wrote " << dir << "/histogram.svg\n";
    }
  }
  return 0;
}

int cmd_report(const CommonArgs& a, bool verify) {
  auto l = load(a);
  auto s = build_scenario(l.cfg, l.base_dir);
  auto r = compute_report(s);
  if (r.gain_warning)
    warn("kappa1 is outside the low-gain regime (ratio " +
         g6(r.small_gain_ratio) + ")");
  write_scalar_report(std::cout, r, l.hash);

  std::string dir = ensure_outdir(l.cfg);
  {
    std::ofstream out(dir + "/report.txt");
    if (!out) fail(ErrorCategory::IoError, "cannot write report.txt");
    write_scalar_report(out, r, l.hash);
  }
  std::cout << "wrote " << dir << "/report.txt\n";

  auto grid = spectrum_grid(s);
  auto coeffs = paired_coefficients(s.rates, r.kappa1, s.mode_pair,
                                    s.omega_pump, grid);
  auto spec = biphoton_spectrum(coeffs);
  auto taus = tau_grid(s);
  auto g2 = g2_closed(s.rates, std::abs(r.kappa1), taus, true);
  if (l.cfg.output.csv) {
    write_spectrum_csv(dir + "/spectrum.csv", grid, s.mode_pair.Omega_signal,
                       spec.S, l.hash);
    write_g2_csv(dir + "/g2.csv", taus, g2.G2, g2.accidental_level, l.hash);
    std::cout << "wrote " << dir << "/spectrum.csv\n";
    std::cout << "wrote " << dir << "/g2.csv\n";
  }
  if (l.cfg.output.svg) {
    std::vector<double> det_mhz, tau_ns_v, det_ghz, gain;
    for (double w : grid)
      det_mhz.push_back((w - s.mode_pair.Omega_signal) / twopi / 1e6);
    for (double t : taus) tau_ns_v.push_back(t / units::ns);
    int n = 601;
    for (int j = 0; j < n; ++j) {
      double d = (-3.0 + 6.0 * j / (n - 1.0)) * r.gain_linewidth;
      double sc = num::sinc(
          delta_k(s.crystal, s.omega_center + d, s.omega_pump) *
          s.crystal.length / 2.0);
      det_ghz.push_back(d / twopi / 1e9);
      gain.push_back(sc * sc);
    }
    const auto& y = model_for_axis(s.crystal.dispersion, Axis::Y);
    const auto& z = model_for_axis(s.crystal.dispersion, Axis::Z);
    double lo = std::max(y.range_lo_um, z.range_lo_um) * 1.001;
    double hi = std::min(y.range_hi_um, z.range_hi_um) * 0.999;
    std::vector<double> lam, ny, nz;
    for (int j = 0; j < 240; ++j) {
      double lum = lo + (hi - lo) * j / 239.0;
      double w = omega_from_wavelength(lum * units::um);
      lam.push_back(lum);
      ny.push_back(refractive_index(y, w));
      nz.push_back(refractive_index(z, w));
    }
    std::vector<PlotPanel> panels;
    panels.push_back({"biphoton spectral density", "detuning (MHz)",
                      "S (1/(s rad/s))",
                      {{"", det_mhz, spec.S, ""}}});
    panels.push_back({"time correlation", "delay (ns)", "G2 (1/s^2)",
                      {{"", tau_ns_v, g2.G2, ""}}});
    panels.push_back({"crystal gain profile", "detuning (GHz)", "sinc^2",
                      {{"", det_ghz, gain, ""}}});
    panels.push_back({"refractive index", "wavelength (um)", "n",
                      {{"n_y", lam, ny, ""}, {"n_z", lam, nz, ""}}});
    write_svg_grid(dir + "/report.svg", "biphoton source report", panels);
    std::cout << "wrote " << dir << "/report.svg\n";
  }
  if (verify) run_verify(s);
  return 0;
}

int cmd_oracle(const CommonArgs& a, bool trace) {
  auto l = load(a);
  auto s = build_scenario(l.cfg, l.base_dir);
  run_verify(s);
  if (trace) {
    std::string dir = ensure_outdir(l.cfg);
    SeededRun run;
    run.detuning = 0.75 * s.rates.Gamma_signal;
    run.seed_signal = 1.0;
    run.record_trace = true;
    auto t = cavity_transfer_oracle(s.rates, scenario_kappa1(s), run);
    write_trace_csv(dir + "/trace.csv", t.trace, l.hash);
    std::cout << "wrote " << dir << "/trace.csv\n";
  }
  return 0;
}

int exit_code_for(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::ConfigError:
    case ErrorCategory::Unsupported:
    case ErrorCategory::InvalidModel:
    case ErrorCategory::MissingCalibration:
    case ErrorCategory::InvalidDuration:
    case ErrorCategory::IncompatibleNormalization:
      return 2;
    case ErrorCategory::IoError:
      return 4;
    default:
      return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"backward-wave biphoton source simulator"};
  app.require_subcommand(1);

  CommonArgs a_disp, a_design, a_cavity, a_free, a_biph, a_g2, a_events,
      a_report, a_oracle;
  double free_kappa = 0.0;
  bool biph_verify = false, report_verify = false, g2_no_acc = false;
  double ev_duration = 0.0, ev_rate = 0.0;
  long long ev_seed = -1;
  bool oracle_trace = false;

  auto* c_disp =
      app.add_subcommand("dispersion", "refractive index and group data");
  add_common(c_disp, a_disp);
  auto* c_design =
      app.add_subcommand("design", "poling period and mode structure");
  add_common(c_design, a_design);
  auto* c_cavity = app.add_subcommand("cavity", "decay rates and mode pair");
  add_common(c_cavity, a_cavity);
  auto* c_free =
      app.add_subcommand("freespace", "unresonated crystal spectrum");
  add_common(c_free, a_free);
  c_free->add_option("--kappa", free_kappa,
                     "coupling in 1/m (default: from calibration)");
  auto* c_biph =
      app.add_subcommand("biphoton", "resonated spectrum and brightness");
  add_common(c_biph, a_biph);
  c_biph->add_flag("--verify", biph_verify,
                   "cross-check closed forms against the oracles");
  auto* c_g2 = app.add_subcommand("g2", "time correlation");
  add_common(c_g2, a_g2);
  c_g2->add_flag("--no-accidentals", g2_no_acc,
                 "write the pair term without the accidental floor");
  auto* c_events =
      app.add_subcommand("events", "simulated detection stream");
  add_common(c_events, a_events);
  c_events->add_option("--duration", ev_duration, "run length in seconds");
  c_events->add_option("--seed", ev_seed, "random seed");
  c_events->add_option("--rate", ev_rate, "pair rate in 1/s");
  auto* c_report = app.add_subcommand("report", "full scalar report");
  add_common(c_report, a_report);
  c_report->add_flag("--verify", report_verify,
                     "cross-check closed forms against the oracles");
  auto* c_oracle = app.add_subcommand("oracle", "numerical cross-checks");
  c_oracle->group("");
  add_common(c_oracle, a_oracle);
  c_oracle->add_flag("--trace", oracle_trace, "write the ring-up trace");

  try {
    app.parse(argc, argv);
    if (c_disp->parsed()) return cmd_dispersion(a_disp);
    if (c_design->parsed()) return cmd_design(a_design);
    if (c_cavity->parsed()) return cmd_cavity(a_cavity);
    if (c_free->parsed()) return cmd_freespace(a_free, free_kappa);
    if (c_biph->parsed()) return cmd_biphoton(a_biph, biph_verify);
    if (c_g2->parsed()) return cmd_g2(a_g2, g2_no_acc);
    if (c_events->parsed())
      return cmd_events(a_events, ev_duration, ev_seed, ev_rate);
    if (c_report->parsed()) return cmd_report(a_report, report_verify);
    if (c_oracle->parsed()) return cmd_oracle(a_oracle, oracle_trace);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const bwspdc::Error& e) {
    std::cerr << "error category=" << to_string(e.category())
              << " msg=" << e.what() << "\n";
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error category=Internal msg=" << e.what() << "\n";
    return 3;
  }
  return 0;
}
