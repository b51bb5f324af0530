#include "bwspdc/phasematch.hpp"

#include <cmath>
#include <string>

#include "bwspdc/constants.hpp"
#include "bwspdc/error.hpp"
#include "bwspdc/numerics.hpp"

namespace bwspdc {

double crystal_wavevector(const CrystalSpec& crystal, Axis axis,
                          double omega) {
  double n = refractive_index(model_for_axis(crystal.dispersion, axis), omega);
  return n * omega / c_light;
}

namespace {

double wavevector(const CrystalSpec& crystal, Axis axis, double omega) {
  return crystal_wavevector(crystal, axis, omega);
}

double inv_group_velocity(const CrystalSpec& crystal, Axis axis,
                          double omega) {
  auto s = dispersion_sample(model_for_axis(crystal.dispersion, axis), omega);
  return 1.0 / s.group_velocity;
}

constexpr double kSincFwhmFactor = 1.77 * pi;

}  // namespace

void validate_crystal(const CrystalSpec& crystal) {
  if (!(crystal.length > 0.0))
    fail(ErrorCategory::ConfigError, "crystal length must be positive");
  if (!(crystal.poling_period > 0.0))
    fail(ErrorCategory::ConfigError, "poling period must be positive");
  if (crystal.qpm_order < 1)
    fail(ErrorCategory::ConfigError, "grating order must be >= 1");
}

double grating_wavevector(const CrystalSpec& crystal) {
  return 2.0 * pi * crystal.qpm_order / crystal.poling_period;
}

double qpm_poling_period(const CrystalSpec& crystal, double lambda_pump,
                         double lambda_signal) {
  if (!(lambda_pump > 0.0) || !(lambda_signal > lambda_pump))
    fail(ErrorCategory::ConfigError,
         "need 0 < pump wavelength < signal wavelength");
  double lambda_idler = 1.0 / (1.0 / lambda_pump - 1.0 / lambda_signal);
  double kp =
      wavevector(crystal, crystal.pump_axis, omega_from_wavelength(lambda_pump));
  double ks = wavevector(crystal, crystal.signal_axis,
                         omega_from_wavelength(lambda_signal));
  double ki = wavevector(crystal, crystal.idler_axis,
                         omega_from_wavelength(lambda_idler));
  double net = crystal.geometry == Geometry::Backward ? kp - ks + ki
                                                      : kp - ks - ki;
  if (!(net > 0.0))
    fail(ErrorCategory::NonPositiveDenominator,
         "no grating period phase-matches this combination (net mismatch " +
             std::to_string(net) + " 1/m)");
  return 2.0 * pi * crystal.qpm_order / net;
}

double delta_k(const CrystalSpec& crystal, double omega_signal,
               double omega_pump) {
  double omega_idler = omega_pump - omega_signal;
  double ks = wavevector(crystal, crystal.signal_axis, omega_signal);
  double ki = wavevector(crystal, crystal.idler_axis, omega_idler);
  double kp = wavevector(crystal, crystal.pump_axis, omega_pump);
  double kg = grating_wavevector(crystal);
  return crystal.geometry == Geometry::Backward ? ks - ki + kg - kp
                                                : ks + ki + kg - kp;
}

double inverse_velocity_sum(const CrystalSpec& crystal, double omega_pump,
                            double omega_center) {
  double us = inv_group_velocity(crystal, crystal.signal_axis, omega_center);
  double ui = inv_group_velocity(crystal, crystal.idler_axis,
                                 omega_pump - omega_center);
  return crystal.geometry == Geometry::Backward ? us + ui : us - ui;
}

double delta_k_linearized(const CrystalSpec& crystal, double omega_pump,
                          double omega_center, double delta_omega) {
  return inverse_velocity_sum(crystal, omega_pump, omega_center) * delta_omega;
}

double phasematched_center(const CrystalSpec& crystal, double omega_pump) {
  double omega0 = omega_pump / 2.0;
  auto mismatch = [&](double w) { return delta_k(crystal, w, omega_pump); };
  double f0 = mismatch(omega0);
  if (f0 == 0.0) return omega0;
  double lo = omega0, hi = omega0, flo = f0, fhi = f0;
  for (double h = 1e-6 * omega0; h <= 0.3 * omega0; h *= 2.0) {
    bool expanded = false;
    try {
      double w = omega0 - h, f = mismatch(w);
      if (f * flo <= 0.0) {
        return num::bisect([&](double x) { return mismatch(x); }, w, lo);
      }
      lo = w;
      flo = f;
      expanded = true;
    } catch (const Error&) {
    }
    try {
      double w = omega0 + h, f = mismatch(w);
      if (f * fhi <= 0.0) {
        return num::bisect([&](double x) { return mismatch(x); }, hi, w);
      }
      hi = w;
      fhi = f;
      expanded = true;
    } catch (const Error&) {
    }
    if (!expanded) break;
  }
  fail(ErrorCategory::OutOfRange,
       "no phase-matched signal frequency found near half the pump frequency");
}

namespace {

double checked_velocity_sum(const CrystalSpec& crystal, double omega_pump,
                            double omega_center) {
  double us = inv_group_velocity(crystal, crystal.signal_axis, omega_center);
  double ui = inv_group_velocity(crystal, crystal.idler_axis,
                                 omega_pump - omega_center);
  double u = crystal.geometry == Geometry::Backward ? us + ui : us - ui;
  if (std::abs(u) < 1e-6 * (std::abs(us) + std::abs(ui)))
    fail(ErrorCategory::DegenerateForward,
         "group velocities cancel; gain bandwidth diverges");
  return std::abs(u);
}

}  // namespace

double gain_linewidth(const CrystalSpec& crystal, double omega_pump,
                      double omega_center) {
  double u = checked_velocity_sum(crystal, omega_pump, omega_center);
  return kSincFwhmFactor / (u * crystal.length);
}

double gain_linewidth_scanned(const CrystalSpec& crystal, double omega_pump,
                              double omega_center) {
  double guess = gain_linewidth(crystal, omega_pump, omega_center);
  auto profile = [&](double detuning) {
    double dk = delta_k(crystal, omega_center + detuning, omega_pump);
    double s = num::sinc(dk * crystal.length / 2.0);
    return s * s;
  };
  return num::full_width_at_level(profile, 0.0, 0.5 * profile(0.0),
                                  guess / 8.0);
}

std::vector<double> freespace_spectrum(const CrystalSpec& crystal,
                                       double kappa,
                                       const std::vector<double>& omega_grid,
                                       double omega_pump) {
  double l = crystal.length;
  double scale = kappa * kappa * l * l / (2.0 * pi);
  std::vector<double> out;
  out.reserve(omega_grid.size());
  for (double w : omega_grid) {
    double s = num::sinc(delta_k(crystal, w, omega_pump) * l / 2.0);
    out.push_back(scale * s * s);
  }
  return out;
}

double freespace_rate(const CrystalSpec& crystal, double kappa,
                      double omega_pump, double omega_center) {
  double u = checked_velocity_sum(crystal, omega_pump, omega_center);
  return kappa * kappa * crystal.length / u;
}

ScatterPoint freespace_point(double kappa, double delta_k, double length,
                             double k_signal, double k_idler) {
  const std::complex<double> i1(0.0, 1.0);
  ScatterPoint out;
  out.A = std::exp(i1 * k_signal * length);
  out.D = std::exp(i1 * k_idler * length);
  out.B = i1 * kappa * length * num::sinc(delta_k * length / 2.0) *
          std::exp(i1 * (delta_k / 2.0 + k_signal + k_idler) * length);
  out.C = std::conj(out.B) * std::exp(i1 * (k_signal + k_idler) * length);
  return out;
}

FreeSpaceCoefficients freespace_coefficients(
    const CrystalSpec& crystal, double kappa,
    const std::vector<double>& omega_grid, double omega_pump) {
  double l = crystal.length;
  FreeSpaceCoefficients out;
  out.omega = omega_grid;
  out.kappa = kappa;
  out.gain_warning = kappa * l > 0.3;
  out.A.reserve(omega_grid.size());
  out.B.reserve(omega_grid.size());
  out.C.reserve(omega_grid.size());
  out.D.reserve(omega_grid.size());
  for (double w : omega_grid) {
    double ks = wavevector(crystal, crystal.signal_axis, w);
    double ki = wavevector(crystal, crystal.idler_axis, omega_pump - w);
    double dk = delta_k(crystal, w, omega_pump);
    ScatterPoint p = freespace_point(kappa, dk, l, ks, ki);
    out.A.push_back(p.A);
    out.B.push_back(p.B);
    out.C.push_back(p.C);
    out.D.push_back(p.D);
  }
  return out;
}

}  // namespace bwspdc
