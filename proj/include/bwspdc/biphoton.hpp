#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "bwspdc/cavity.hpp"

namespace bwspdc {

// How the single-mode-pair coupling rate kappa1 is obtained. Either a
// measured pair rate per watt of pump anchors it, or it is given outright.
struct Kappa1Calibration {
  std::optional<double> pair_rate_per_watt;  // 1/(s W)
  std::optional<double> kappa1;              // rad/s, overrides the above
};

// kappa1 for the operating mode pair, including the phase-mismatch factor
// sinc(dk' L / 2) e^{i dk' L / 2} where dk' is the residual mismatch at the
// mode-pair lock point. Fails with MissingCalibration when the calibration
// carries neither anchor.
std::complex<double> kappa1_from_pump(double pump_power,
                                      const Kappa1Calibration& calibration,
                                      const DecayRates& rates,
                                      double delta_k_prime, double length);

// Frequency-domain input/output coefficients of the doubly resonant pair,
//   b_s_out(w)      = A1 b_s_in(w)      + B1 b_i_dag_in(w)
//   b_i_dag_out(wi) = C1 b_s_in(w)      + D1 b_i_dag_in(wi),  wi = wp - w.
struct PairedModeCoefficients {
  std::vector<double> omega;  // signal angular frequency grid
  std::vector<std::complex<double>> A1, B1, C1, D1;
  std::complex<double> kappa1{0.0, 0.0};
  double Omega_signal = 0.0;
  double Omega_idler = 0.0;
  double omega_pump = 0.0;
  DecayRates rates;
  bool gain_warning = false;  // |kappa1| not small against the decay rates
};

PairedModeCoefficients paired_coefficients(const DecayRates& rates,
                                           std::complex<double> kappa1,
                                           const ModePair& pair,
                                           double omega_pump,
                                           const std::vector<double>& grid);

// Emitted biphoton spectral density |B1|^2 / (2 pi) on the coefficient grid,
// plus the closed-form Lorentzian-product value and linewidths.
struct SpectrumResult {
  std::vector<double> S;          // 1/(s rad/s) vs coefficient grid
  double peak = 0.0;
  double linewidth_closed = 0.0;  // FWHM from the Lorentzian product
  double linewidth_scanned = 0.0; // FWHM measured on the closed form
};

SpectrumResult biphoton_spectrum(const PairedModeCoefficients& coeffs);

// Closed-form spectral density at signal detuning ds = w - Omega_signal with
// the idler pinned by energy conservation.
double spectrum_closed_form(const DecayRates& rates, double kappa1_mag,
                            double detuning_signal, double detuning_idler);

// FWHM of the Lorentzian-product spectrum at double resonance.
double spectrum_fwhm(double Gamma_signal, double Gamma_idler);

// Frequency-integrated pair rate 4 gs gi k1^2 / (Gs Gi (Gs + Gi)).
double pair_rate(const DecayRates& rates, double kappa1_mag);

// Glauber correlation of the two output fields vs idler-signal delay.
struct G2Result {
  std::vector<double> tau;  // s
  std::vector<double> G2;   // 1/s^2, pair term only unless accidentals set
  double coherence_time = 0.0;       // ln2 (1/Gs + 1/Gi)
  double correlation_time = 0.0;     // width between 1/e points of pair term
  double accidental_level = 0.0;     // R1^2
};

G2Result g2_closed(const DecayRates& rates, double kappa1_mag,
                   const std::vector<double>& tau_grid,
                   bool include_accidentals);

// Pair term of G2 at one delay, evaluated from the Fourier integral of the
// A1 C1* product instead of the closed form.
double g2_fourier(const DecayRates& rates, std::complex<double> kappa1,
                  double tau);

struct Brightness {
  double per_rad_s = 0.0;   // pairs/s per rad/s of linewidth
  double per_mhz = 0.0;     // pairs/s per MHz
  double per_mhz_per_mw = 0.0;
};

Brightness brightness(double rate, double linewidth, double pump_power);

// Rate-per-linewidth ratio between a resonated source and a free-space
// reference, each summarized by its figures at a stated pump power. Fails
// with IncompatibleNormalization when the pump powers differ.
struct SourceFigures {
  double rate = 0.0;        // pairs/s
  double linewidth = 0.0;   // rad/s
  double pump_power = 0.0;  // W
};

double resonant_vs_forward_ratio(const SourceFigures& resonant,
                                 const SourceFigures& forward);

// Travelling-wave coupling constant that reproduces kappa1 through
// kappa1 = eta_s eta_i (kappa/2) sqrt(v_s v_i): inverting for kappa lets the
// same pump drive the free-space reference.
double freespace_kappa_from_kappa1(double kappa1_mag, double vg_signal,
                                   double vg_idler, double eta_signal,
                                   double eta_idler);

}  // namespace bwspdc
