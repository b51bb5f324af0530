#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "bwspdc/biphoton.hpp"
#include "bwspdc/constants.hpp"
#include "bwspdc/error.hpp"

using namespace bwspdc;
using doctest::Approx;
using C = std::complex<double>;

namespace {

DecayRates make_rates(double xi_signal = 0.0) {
  DecayRates r;
  r.spacing_signal = 2.0 * pi * 2.812031e9;
  r.spacing_idler = 2.0 * pi * 2.669362e9;
  r.gamma_signal = r.spacing_signal * 1e-3;
  r.gamma_idler = r.spacing_idler * 1e-3;
  r.Gamma_signal = r.gamma_signal + 2.0 * xi_signal * r.spacing_signal;
  r.Gamma_idler = r.gamma_idler;
  r.finesse_signal = r.spacing_signal / r.Gamma_signal;
  r.finesse_idler = r.spacing_idler / r.Gamma_idler;
  return r;
}

ModePair make_pair(double omega_pump) {
  ModePair p;
  p.Omega_signal = omega_pump / 2.0;
  p.Omega_idler = omega_pump / 2.0;
  p.index_signal = 100198;
  p.index_idler = 105553;
  return p;
}

const double omega_pump = omega_from_wavelength(532e-9);

std::vector<double> detuning_grid(const DecayRates& r, double halfwidth,
                                  int n) {
  std::vector<double> g;
  double lw = spectrum_fwhm(r.Gamma_signal, r.Gamma_idler);
  for (int k = 0; k < n; ++k)
    g.push_back(omega_pump / 2.0 + lw * halfwidth * (2.0 * k / (n - 1.0) - 1.0));
  return g;
}

}  // namespace

TEST_CASE("calibration anchors the coupling to the measured rate") {
  auto r = make_rates();
  Kappa1Calibration cal;
  cal.pair_rate_per_watt = 170129870.12987013;
  double power = 0.77e-3;
  C k1 = kappa1_from_pump(power, cal, r, 0.0, 0.03);
  // round trip: the derived coupling reproduces the anchored rate
  CHECK(pair_rate(r, std::abs(k1)) ==
        Approx(*cal.pair_rate_per_watt * power).epsilon(1e-12));
  // kappa1 grows with the square root of the pump power
  C k4 = kappa1_from_pump(4.0 * power, cal, r, 0.0, 0.03);
  CHECK(std::abs(k4) == Approx(2.0 * std::abs(k1)).epsilon(1e-12));
}

TEST_CASE("explicit kappa1 wins over the rate anchor") {
  auto r = make_rates();
  Kappa1Calibration cal;
  cal.pair_rate_per_watt = 1e8;
  cal.kappa1 = 5e5;
  CHECK(std::abs(kappa1_from_pump(1e-3, cal, r, 0.0, 0.03)) ==
        Approx(5e5).epsilon(1e-12));
}

TEST_CASE("residual mismatch suppresses the coupling through the sinc") {
  auto r = make_rates();
  Kappa1Calibration cal;
  cal.kappa1 = 5e5;
  double length = 0.03;
  C on = kappa1_from_pump(1e-3, cal, r, 0.0, length);
  C zero = kappa1_from_pump(1e-3, cal, r, 2.0 * pi / length, length);
  CHECK(std::abs(zero) < 1e-10 * std::abs(on));
}

TEST_CASE("no calibration, no coupling") {
  Kappa1Calibration cal;
  CHECK_THROWS_AS(kappa1_from_pump(1e-3, cal, make_rates(), 0.0, 0.03), Error);
  try {
    kappa1_from_pump(1e-3, cal, make_rates(), 0.0, 0.03);
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::MissingCalibration);
  }
}

TEST_CASE("paired coefficients obey the backward-wave symmetries") {
  auto r = make_rates();
  auto grid = detuning_grid(r, 4.0, 41);
  auto coeffs = paired_coefficients(r, C(1e6, 0.0), make_pair(omega_pump),
                                    omega_pump, grid);
  REQUIRE(coeffs.A1.size() == grid.size());
  CHECK_FALSE(coeffs.gain_warning);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(std::abs(coeffs.C1[k] + coeffs.B1[k]) == 0.0);
    // lossless: the cavity only reshapes the reflected phase
    CHECK(std::abs(coeffs.A1[k]) == Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(coeffs.D1[k]) == Approx(1.0).epsilon(1e-12));
  }
  // on resonance the reflection is real and unity for a lossless cavity
  std::size_t mid = grid.size() / 2;
  CHECK(coeffs.A1[mid].real() == Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(coeffs.A1[mid].imag()) < 1e-9);
}

TEST_CASE("loss breaks the unit-modulus reflection") {
  auto r = make_rates(1e-4);
  auto grid = detuning_grid(r, 2.0, 21);
  auto coeffs = paired_coefficients(r, C(1e6, 0.0), make_pair(omega_pump),
                                    omega_pump, grid);
  for (std::size_t k = 0; k < grid.size(); ++k)
    CHECK(std::abs(coeffs.A1[k]) < 1.0);
}

TEST_CASE("spectral density equals the closed Lorentzian product") {
  auto r = make_rates();
  double kappa = 1e6;
  auto grid = detuning_grid(r, 6.0, 101);
  auto coeffs = paired_coefficients(r, C(kappa, 0.0), make_pair(omega_pump),
                                    omega_pump, grid);
  auto spec = biphoton_spectrum(coeffs);
  REQUIRE(spec.S.size() == grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double ds = grid[k] - omega_pump / 2.0;
    CHECK(spec.S[k] ==
          Approx(spectrum_closed_form(r, kappa, ds, -ds)).epsilon(1e-12));
  }
  CHECK(spec.linewidth_closed ==
        Approx(spectrum_fwhm(r.Gamma_signal, r.Gamma_idler)).epsilon(1e-12));
  CHECK(spec.linewidth_scanned ==
        Approx(spec.linewidth_closed).epsilon(1e-6));
  CHECK(spec.peak == Approx(spectrum_closed_form(r, kappa, 0.0, 0.0))
                         .epsilon(1e-12));
}

TEST_CASE("sub-natural linewidth of the doubly resonant pair") {
  // equal decay rates: FWHM = Gamma * sqrt(sqrt 2 - 1) ~ 0.6436 Gamma
  double g = 2.0 * pi * 2.8e6;
  CHECK(spectrum_fwhm(g, g) ==
        Approx(g * std::sqrt(std::sqrt(2.0) - 1.0)).epsilon(1e-12));
  auto r = make_rates();
  double fwhm = spectrum_fwhm(r.Gamma_signal, r.Gamma_idler);
  CHECK(fwhm < r.Gamma_signal);
  CHECK(fwhm < r.Gamma_idler);
  CHECK(fwhm == Approx(1.10738250e7).epsilon(1e-6));
}

TEST_CASE("frequency-integrated spectrum reproduces the pair rate") {
  auto r = make_rates();
  double kappa = 1e6;
  double width = 60.0 * std::max(r.Gamma_signal, r.Gamma_idler);
  const int n = 40001;
  std::vector<double> s;
  s.reserve(n);
  for (int k = 0; k < n; ++k) {
    double ds = width * (2.0 * k / (n - 1.0) - 1.0);
    s.push_back(spectrum_closed_form(r, kappa, ds, -ds));
  }
  double integral = 0.0;
  double dx = 2.0 * width / (n - 1);
  for (int k = 0; k < n - 1; ++k) integral += 0.5 * (s[k] + s[k + 1]) * dx;
  CHECK(integral == Approx(pair_rate(r, kappa)).epsilon(2e-3));
}

TEST_CASE("time correlation: exponential wings, continuity, integral") {
  auto r = make_rates();
  double kappa = 1e6;
  std::vector<double> taus;
  double span = 12.0 / std::min(r.Gamma_signal, r.Gamma_idler);
  const int n = 48001;
  for (int k = 0; k < n; ++k) taus.push_back(span * (2.0 * k / (n - 1.0) - 1.0));
  auto g2 = g2_closed(r, kappa, taus, false);

  CHECK(g2.coherence_time ==
        Approx(std::log(2.0) * (1.0 / r.Gamma_signal + 1.0 / r.Gamma_idler))
            .epsilon(1e-12));
  CHECK(g2.correlation_time ==
        Approx(1.0 / r.Gamma_signal + 1.0 / r.Gamma_idler).epsilon(1e-12));
  CHECK(g2.accidental_level == Approx(pair_rate(r, kappa) *
                                      pair_rate(r, kappa)).epsilon(1e-12));

  // wings decay with the idler rate to the right, the signal rate to the left
  auto pair_term = [&](double tau) {
    std::vector<double> one{tau};
    return g2_closed(r, kappa, one, false).G2[0];
  };
  double peak = pair_term(0.0);
  CHECK(pair_term(100e-9) ==
        Approx(peak * std::exp(-r.Gamma_idler * 100e-9)).epsilon(1e-12));
  CHECK(pair_term(-100e-9) ==
        Approx(peak * std::exp(-r.Gamma_signal * 100e-9)).epsilon(1e-12));
  CHECK(pair_term(1e-13) == Approx(pair_term(-1e-13)).epsilon(1e-5));

  double integral = 0.0;
  for (int k = 0; k < n - 1; ++k)
    integral += 0.5 * (g2.G2[k] + g2.G2[k + 1]) * (taus[k + 1] - taus[k]);
  CHECK(integral == Approx(pair_rate(r, kappa)).epsilon(1e-3));
}

TEST_CASE("fourier transform of the coefficients matches the closed g2") {
  auto r = make_rates();
  double kappa = 1e6;
  for (double tau : {-120e-9, -30e-9, 0.0, 45e-9, 150e-9}) {
    std::vector<double> one{tau};
    double closed = g2_closed(r, kappa, one, false).G2[0];
    CHECK(g2_fourier(r, C(kappa, 0.0), tau) ==
          Approx(closed).epsilon(1e-6));
  }
}

TEST_CASE("brightness bookkeeping") {
  auto b = brightness(1.31e5, 2.0 * pi * 2.1e6, 0.77e-3);
  CHECK(b.per_mhz == Approx(1.31e5 / 2.1).epsilon(1e-12));
  CHECK(b.per_mhz_per_mw == Approx(1.31e5 / 2.1 / 0.77).epsilon(1e-12));
  CHECK(b.per_rad_s == Approx(1.31e5 / (2.0 * pi * 2.1e6)).epsilon(1e-12));
}

TEST_CASE("resonant vs forward comparison normalizes by linewidth") {
  SourceFigures res{1.31e5, 2.0 * pi * 2.1e6, 0.77e-3};
  SourceFigures fwd{6.3e4, 2.0 * pi * 93.0e9, 0.77e-3};
  double want = (res.rate / res.linewidth) / (fwd.rate / fwd.linewidth);
  CHECK(resonant_vs_forward_ratio(res, fwd) == Approx(want).epsilon(1e-12));

  fwd.pump_power = 1.0e-3;
  try {
    resonant_vs_forward_ratio(res, fwd);
    FAIL("expected a normalization error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::IncompatibleNormalization);
  }
}

TEST_CASE("travelling-wave coupling round trip") {
  double vs = 1.687219e8, vi = 1.601617e8;
  double eta = 1.0 / std::sqrt(2.0);
  double kappa1 = 1.06204039e6;
  double kappa = freespace_kappa_from_kappa1(kappa1, vs, vi, eta, eta);
  CHECK(kappa == Approx(2.58425897e-2).epsilon(1e-6));
  CHECK(eta * eta * (kappa / 2.0) * std::sqrt(vs * vi) ==
        Approx(kappa1).epsilon(1e-12));
}

TEST_CASE("gain warning trips when the coupling rivals the decay") {
  auto r = make_rates();
  double half_bandwidth = std::sqrt(r.Gamma_signal * r.Gamma_idler) / 2.0;
  auto grid = detuning_grid(r, 2.0, 11);
  auto quiet = paired_coefficients(r, C(0.2 * half_bandwidth, 0.0),
                                   make_pair(omega_pump), omega_pump, grid);
  CHECK_FALSE(quiet.gain_warning);
  auto loud = paired_coefficients(r, C(0.4 * half_bandwidth, 0.0),
                                  make_pair(omega_pump), omega_pump, grid);
  CHECK(loud.gain_warning);
}
