#pragma once

#include <complex>
#include <vector>

#include "bwspdc/dispersion.hpp"

namespace bwspdc {

enum class Geometry { Backward, Forward };

// Collinear quasi-phase-matched crystal. The pump propagates along +z; in the
// Backward geometry the generated idler counter-propagates, in Forward both
// generated waves co-propagate with the pump.
struct CrystalSpec {
  double length = 0.0;         // m
  double poling_period = 0.0;  // m, domain-inverted grating period
  int qpm_order = 1;           // odd grating order actually used
  Axis pump_axis = Axis::Y;
  Axis signal_axis = Axis::Y;
  Axis idler_axis = Axis::Z;
  Geometry geometry = Geometry::Backward;
  DispersionData dispersion;
};

void validate_crystal(const CrystalSpec& crystal);

// Grating wavevector 2*pi*m / poling_period.
double grating_wavevector(const CrystalSpec& crystal);

// n(omega) * omega / c along one polarization axis.
double crystal_wavevector(const CrystalSpec& crystal, Axis axis,
                          double omega);

// Poling period that phase-matches signal at lambda_signal for a pump at
// lambda_pump (idler fixed by energy conservation). Wavelengths in meters.
// Fails with NonPositiveDenominator when the requested geometry has no
// momentum mismatch for the grating to compensate.
double qpm_poling_period(const CrystalSpec& crystal, double lambda_pump,
                         double lambda_signal);

// Residual wavevector mismatch at a given signal frequency.
//   Backward: k_s - k_i + K_G - k_p   (idler counter-propagating)
//   Forward:  k_s + k_i + K_G - k_p
// Zero at the design point; for Backward the slope in the signal detuning is
// +(1/v_s + 1/v_i).
double delta_k(const CrystalSpec& crystal, double omega_signal,
               double omega_pump);

// Group-velocity inverse that multiplies the signal detuning in the
// linearized mismatch: 1/v_s + 1/v_i (Backward) or 1/v_s - 1/v_i (Forward),
// evaluated at omega_center / omega_pump - omega_center.
double inverse_velocity_sum(const CrystalSpec& crystal, double omega_pump,
                            double omega_center);

double delta_k_linearized(const CrystalSpec& crystal, double omega_pump,
                          double omega_center, double delta_omega);

// Signal frequency at which delta_k crosses zero, searched around
// omega_pump / 2.
double phasematched_center(const CrystalSpec& crystal, double omega_pump);

// FWHM of the sinc^2 gain profile, closed form 1.77*pi / (u * L).
// Fails with DegenerateForward when the group velocities cancel (Forward
// geometry near degeneracy) and the linewidth diverges.
double gain_linewidth(const CrystalSpec& crystal, double omega_pump,
                      double omega_center);

// Same linewidth measured by scanning the exact sinc^2 profile; assumes
// omega_center is the phase-matched peak.
double gain_linewidth_scanned(const CrystalSpec& crystal, double omega_pump,
                              double omega_center);

// Two-photon spectral density of the unresonated crystal,
// kappa^2 L^2 sinc^2(delta_k L / 2) / (2 pi), per unit angular frequency.
std::vector<double> freespace_spectrum(const CrystalSpec& crystal,
                                       double kappa,
                                       const std::vector<double>& omega_grid,
                                       double omega_pump);

// Frequency-integrated pair rate of the unresonated crystal, kappa^2 L / u.
double freespace_rate(const CrystalSpec& crystal, double kappa,
                      double omega_pump, double omega_center);

// Input/output coefficients of the crystal treated as a two-mode scatterer:
//   a_s_out = A a_s_in + B a_i_dag_in
//   a_i_dag_out = C a_s_in + D a_i_dag_in
struct ScatterPoint {
  std::complex<double> A{0.0, 0.0}, B{0.0, 0.0}, C{0.0, 0.0}, D{0.0, 0.0};
};

// Low-gain scattering coefficients for one (mismatch, wavevector) tuple.
ScatterPoint freespace_point(double kappa, double delta_k, double length,
                             double k_signal, double k_idler);

struct FreeSpaceCoefficients {
  std::vector<double> omega;  // signal angular frequency grid
  std::vector<std::complex<double>> A, B, C, D;
  double kappa = 0.0;
  bool gain_warning = false;  // parametric gain outside the low-gain regime
};

FreeSpaceCoefficients freespace_coefficients(
    const CrystalSpec& crystal, double kappa,
    const std::vector<double>& omega_grid, double omega_pump);

}  // namespace bwspdc
