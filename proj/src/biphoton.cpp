#include "bwspdc/biphoton.hpp"

#include <algorithm>
#include <cmath>

#include "bwspdc/constants.hpp"
#include "bwspdc/error.hpp"
#include "bwspdc/numerics.hpp"

namespace bwspdc {

namespace {

void require_decay(const DecayRates& rates) {
  if (!(rates.Gamma_signal > 0.0) || !(rates.Gamma_idler > 0.0))
    fail(ErrorCategory::ZeroDecay, "decay rates must be positive");
}

}  // namespace

std::complex<double> kappa1_from_pump(double pump_power,
                                      const Kappa1Calibration& calibration,
                                      const DecayRates& rates,
                                      double delta_k_prime, double length) {
  double mag;
  if (calibration.kappa1) {
    mag = *calibration.kappa1;
    if (!(mag >= 0.0))
      fail(ErrorCategory::ConfigError, "explicit kappa1 must be >= 0");
  } else if (calibration.pair_rate_per_watt) {
    require_decay(rates);
    if (!(rates.gamma_signal > 0.0) || !(rates.gamma_idler > 0.0))
      fail(ErrorCategory::ZeroDecay,
           "no output coupling; an emitted pair rate cannot anchor kappa1");
    if (!(*calibration.pair_rate_per_watt > 0.0))
      fail(ErrorCategory::ConfigError, "pair rate per watt must be positive");
    if (!(pump_power >= 0.0))
      fail(ErrorCategory::ConfigError, "pump power must be >= 0");
    double rate = *calibration.pair_rate_per_watt * pump_power;
    mag = std::sqrt(rate * rates.Gamma_signal * rates.Gamma_idler *
                    (rates.Gamma_signal + rates.Gamma_idler) /
                    (4.0 * rates.gamma_signal * rates.gamma_idler));
  } else {
    fail(ErrorCategory::MissingCalibration,
         "calibration needs either pair_rate_per_watt or explicit kappa1");
  }
  double half = delta_k_prime * length / 2.0;
  return mag * num::sinc(half) *
         std::exp(std::complex<double>(0.0, half));
}

PairedModeCoefficients paired_coefficients(const DecayRates& rates,
                                           std::complex<double> kappa1,
                                           const ModePair& pair,
                                           double omega_pump,
                                           const std::vector<double>& grid) {
  require_decay(rates);
  PairedModeCoefficients out;
  out.omega = grid;
  out.kappa1 = kappa1;
  out.Omega_signal = pair.Omega_signal;
  out.Omega_idler = pair.Omega_idler;
  out.omega_pump = omega_pump;
  out.rates = rates;
  out.gain_warning = std::abs(kappa1) >
                     0.3 * std::sqrt(rates.Gamma_signal * rates.Gamma_idler) /
                         2.0;
  const std::complex<double> i1(0.0, 1.0);
  double gs = rates.gamma_signal, gi = rates.gamma_idler;
  double hs = rates.Gamma_signal / 2.0, hi = rates.Gamma_idler / 2.0;
  double root_gg = std::sqrt(gs * gi);
  out.A1.reserve(grid.size());
  out.B1.reserve(grid.size());
  out.C1.reserve(grid.size());
  out.D1.reserve(grid.size());
  for (double w : grid) {
    double ds = w - pair.Omega_signal;
    double di = (omega_pump - w) - pair.Omega_idler;
    std::complex<double> ps = hs - i1 * ds;  // signal resonance denominator
    std::complex<double> pi_ = hi + i1 * di;
    std::complex<double> b = -i1 * kappa1 * root_gg / (ps * pi_);
    out.A1.push_back((gs - ps) / ps);
    out.B1.push_back(b);
    out.C1.push_back(-b);
    out.D1.push_back((gi - pi_) / pi_);
  }
  return out;
}

double spectrum_closed_form(const DecayRates& rates, double kappa1_mag,
                            double detuning_signal, double detuning_idler) {
  double gs = rates.gamma_signal, gi = rates.gamma_idler;
  double Gs = rates.Gamma_signal, Gi = rates.Gamma_idler;
  double ls = 4.0 * detuning_signal * detuning_signal + Gs * Gs;
  double li = 4.0 * detuning_idler * detuning_idler + Gi * Gi;
  return 8.0 * gs * gi * kappa1_mag * kappa1_mag / (pi * ls * li);
}

double spectrum_fwhm(double Gamma_signal, double Gamma_idler) {
  double s2 = Gamma_signal * Gamma_signal;
  double i2 = Gamma_idler * Gamma_idler;
  double root = std::sqrt(s2 * s2 + 6.0 * s2 * i2 + i2 * i2);
  return std::sqrt((root - s2 - i2) / 2.0);
}

SpectrumResult biphoton_spectrum(const PairedModeCoefficients& coeffs) {
  SpectrumResult out;
  out.S.reserve(coeffs.omega.size());
  std::size_t peak_at = 0;
  for (std::size_t j = 0; j < coeffs.omega.size(); ++j) {
    double s = std::norm(coeffs.B1[j]) / (2.0 * pi);
    out.S.push_back(s);
    if (s > out.S[peak_at]) peak_at = j;
  }
  if (!out.S.empty()) out.peak = out.S[peak_at];
  const auto& r = coeffs.rates;
  out.linewidth_closed = spectrum_fwhm(r.Gamma_signal, r.Gamma_idler);
  if (!out.S.empty()) {
    double mag = std::abs(coeffs.kappa1);
    double offset =
        coeffs.omega_pump - coeffs.Omega_signal - coeffs.Omega_idler;
    auto profile = [&](double ds) {
      return spectrum_closed_form(r, mag, ds, offset - ds);
    };
    double center = coeffs.omega[peak_at] - coeffs.Omega_signal;
    out.linewidth_scanned = num::full_width_at_level(
        profile, center, 0.5 * profile(center), out.linewidth_closed / 8.0);
  }
  return out;
}

double pair_rate(const DecayRates& rates, double kappa1_mag) {
  require_decay(rates);
  double gs = rates.gamma_signal, gi = rates.gamma_idler;
  double Gs = rates.Gamma_signal, Gi = rates.Gamma_idler;
  return 4.0 * gs * gi * kappa1_mag * kappa1_mag / (Gs * Gi * (Gs + Gi));
}

G2Result g2_closed(const DecayRates& rates, double kappa1_mag,
                   const std::vector<double>& tau_grid,
                   bool include_accidentals) {
  require_decay(rates);
  double gs = rates.gamma_signal, gi = rates.gamma_idler;
  double Gs = rates.Gamma_signal, Gi = rates.Gamma_idler;
  double sum = Gs + Gi;
  // gamma_s gamma_i in the prefactor keeps the pair term integrating to the
  // emitted pair rate when round-trip loss is present; without loss this is
  // the usual 4 Gs Gi k1^2 / (Gs + Gi)^2.
  double front = 4.0 * gs * gi * kappa1_mag * kappa1_mag / (sum * sum);
  G2Result out;
  out.tau = tau_grid;
  out.G2.reserve(tau_grid.size());
  double r1 = pair_rate(rates, kappa1_mag);
  out.accidental_level = r1 * r1;
  for (double t : tau_grid) {
    double pairs = t < 0.0 ? front * std::exp(Gs * t)
                           : front * std::exp(-Gi * t);
    out.G2.push_back(include_accidentals ? pairs + out.accidental_level
                                         : pairs);
  }
  out.coherence_time = std::log(2.0) * (1.0 / Gs + 1.0 / Gi);
  out.correlation_time = 1.0 / Gs + 1.0 / Gi;
  return out;
}

double g2_fourier(const DecayRates& rates, std::complex<double> kappa1,
                  double tau) {
  require_decay(rates);
  const std::complex<double> i1(0.0, 1.0);
  double gs = rates.gamma_signal, gi = rates.gamma_idler;
  double hs = rates.Gamma_signal / 2.0, hi = rates.Gamma_idler / 2.0;
  double root_gg = std::sqrt(gs * gi);
  auto integrand = [&](double d) {
    std::complex<double> ps = hs - i1 * d;
    std::complex<double> pi_ = hi - i1 * d;  // on-grid idler detuning = -d
    std::complex<double> a1 = (gs - ps) / ps;
    std::complex<double> c1 = i1 * kappa1 * root_gg / (ps * pi_);
    return a1 * std::conj(c1);
  };
  double ref = std::max(rates.Gamma_signal, rates.Gamma_idler);
  auto bounds = num::fourier_panels(40.0 * ref, 8000, 1e7 * ref, 40);
  std::complex<double> amp = num::fourier_integral(integrand, bounds, tau);
  return std::norm(amp);
}

Brightness brightness(double rate, double linewidth, double pump_power) {
  if (!(linewidth > 0.0))
    fail(ErrorCategory::ConfigError, "linewidth must be positive");
  if (!(pump_power > 0.0))
    fail(ErrorCategory::ConfigError, "pump power must be positive");
  Brightness out;
  out.per_rad_s = rate / linewidth;
  out.per_mhz = rate / (linewidth / (2.0 * pi * 1e6));
  out.per_mhz_per_mw = out.per_mhz / (pump_power / 1e-3);
  return out;
}

double resonant_vs_forward_ratio(const SourceFigures& resonant,
                                 const SourceFigures& forward) {
  double pmax = std::max(std::abs(resonant.pump_power),
                         std::abs(forward.pump_power));
  if (std::abs(resonant.pump_power - forward.pump_power) > 1e-9 * pmax)
    fail(ErrorCategory::IncompatibleNormalization,
         "sources are normalized at different pump powers");
  if (!(resonant.linewidth > 0.0) || !(forward.linewidth > 0.0) ||
      !(forward.rate > 0.0))
    fail(ErrorCategory::ConfigError,
         "rates and linewidths must be positive to form the ratio");
  return (resonant.rate / resonant.linewidth) /
         (forward.rate / forward.linewidth);
}

double freespace_kappa_from_kappa1(double kappa1_mag, double vg_signal,
                                   double vg_idler, double eta_signal,
                                   double eta_idler) {
  if (!(eta_signal > 0.0) || !(eta_idler > 0.0))
    fail(ErrorCategory::ConfigError, "mode-overlap factors must be positive");
  if (!(vg_signal > 0.0) || !(vg_idler > 0.0))
    fail(ErrorCategory::ConfigError, "group velocities must be positive");
  return 2.0 * kappa1_mag /
         (eta_signal * eta_idler * std::sqrt(vg_signal * vg_idler));
}

}  // namespace bwspdc
