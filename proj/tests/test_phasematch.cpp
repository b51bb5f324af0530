#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "bwspdc/constants.hpp"
#include "bwspdc/error.hpp"
#include "bwspdc/phasematch.hpp"

using namespace bwspdc;
using doctest::Approx;

namespace {

CrystalSpec make_crystal(Geometry geometry = Geometry::Backward) {
  CrystalSpec c;
  c.length = 0.03;
  c.qpm_order = 3;
  c.pump_axis = Axis::Y;
  c.signal_axis = Axis::Y;
  c.idler_axis = Axis::Z;
  c.geometry = geometry;
  c.dispersion = load_dispersion_file(std::string(BWSPDC_SOURCE_ROOT) +
                                      "/data/ktp_sellmeier.json");
  c.poling_period = qpm_poling_period(c, 532e-9, 1064e-9);
  return c;
}

const double omega_pump = omega_from_wavelength(532e-9);

}  // namespace

TEST_CASE("third-order poling periods for both geometries") {
  auto backward = make_crystal(Geometry::Backward);
  CHECK(backward.poling_period == Approx(0.87175209e-6).epsilon(1e-6));
  auto forward = make_crystal(Geometry::Forward);
  CHECK(forward.poling_period == Approx(1.4164583e-3).epsilon(1e-6));
  // the submicron backward grating is the hard one to fabricate
  CHECK(forward.poling_period / backward.poling_period > 1000.0);
}

TEST_CASE("mismatch vanishes at the designed degenerate point") {
  auto c = make_crystal();
  CHECK(std::abs(delta_k(c, omega_pump / 2.0, omega_pump)) < 1e-6);
  CHECK(phasematched_center(c, omega_pump) ==
        Approx(omega_pump / 2.0).epsilon(1e-10));
}

TEST_CASE("mismatch slope matches the group-velocity sum") {
  auto c = make_crystal();
  double u = inverse_velocity_sum(c, omega_pump, omega_pump / 2.0);
  double d = 1e9;  // rad/s, deep inside the linear zone
  double slope = (delta_k(c, omega_pump / 2.0 + d, omega_pump) -
                  delta_k(c, omega_pump / 2.0 - d, omega_pump)) /
                 (2.0 * d);
  CHECK(slope == Approx(u).epsilon(1e-4));
  CHECK(delta_k_linearized(c, omega_pump, omega_pump / 2.0, d) ==
        Approx(u * d).epsilon(1e-12));
}

TEST_CASE("gain linewidths and the forward/backward contrast") {
  auto backward = make_crystal();
  double lw_b = gain_linewidth(backward, omega_pump, omega_pump / 2.0);
  CHECK(lw_b == Approx(1.522964e10).epsilon(1e-5));
  CHECK(gain_linewidth_scanned(backward, omega_pump, omega_pump / 2.0) ==
        Approx(lw_b).epsilon(5e-3));

  auto forward = make_crystal(Geometry::Forward);
  double lw_f = gain_linewidth(forward, omega_pump, omega_pump / 2.0);
  CHECK(lw_f == Approx(2.0 * pi * 93.125818e9).epsilon(1e-5));
  CHECK(lw_f / lw_b == Approx(38.420255).epsilon(1e-5));
}

TEST_CASE("co-polarized forward operation has no linewidth to speak of") {
  auto c = make_crystal(Geometry::Forward);
  c.idler_axis = Axis::Y;  // same group velocity on both arms
  try {
    gain_linewidth(c, omega_pump, omega_pump / 2.0);
    FAIL("expected the degenerate-forward error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::DegenerateForward);
  }
}

TEST_CASE("scatter coefficients at and off the matched point") {
  double kappa = 0.5, length = 0.03;
  double ks = 1.03e7, ki = 1.08e7;

  auto on = freespace_point(kappa, 0.0, length, ks, ki);
  CHECK(std::abs(on.A) == Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(on.D) == Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(on.B) == Approx(kappa * length).epsilon(1e-12));
  CHECK(std::abs(on.C) == Approx(std::abs(on.B)).epsilon(1e-12));

  double dk = 40.0;
  auto off = freespace_point(kappa, dk, length, ks, ki);
  double expected = kappa * length *
                    std::abs(std::sin(dk * length / 2.0) / (dk * length / 2.0));
  CHECK(std::abs(off.B) == Approx(expected).epsilon(1e-12));

  // first sinc zero: the crystal emits nothing into this mode pair
  auto zero = freespace_point(kappa, 2.0 * pi / length, length, ks, ki);
  CHECK(std::abs(zero.B) < 1e-15 * kappa * length);
}

TEST_CASE("spectrum, rate and coefficient grid are consistent") {
  auto c = make_crystal(Geometry::Forward);
  double kappa = 2.58425897e-2;
  CHECK(freespace_rate(c, kappa, omega_pump, omega_pump / 2.0) ==
        Approx(6.3247e4).epsilon(1e-3));

  std::vector<double> grid;
  for (int k = -5; k <= 5; ++k)
    grid.push_back(omega_pump / 2.0 + k * 2e10);
  auto coeffs = freespace_coefficients(c, kappa, grid, omega_pump);
  auto spec = freespace_spectrum(c, kappa, grid, omega_pump);
  REQUIRE(coeffs.B.size() == grid.size());
  CHECK_FALSE(coeffs.gain_warning);
  for (std::size_t k = 0; k < grid.size(); ++k)
    CHECK(std::norm(coeffs.B[k]) / (2.0 * pi) ==
          Approx(spec[k]).epsilon(1e-10));
}

TEST_CASE("crystal validation rejects nonsense") {
  auto c = make_crystal();
  c.length = 0.0;
  try {
    validate_crystal(c);
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::ConfigError);
  }
}

TEST_CASE("grating wavevector scales with the order") {
  auto c = make_crystal();
  CHECK(grating_wavevector(c) ==
        Approx(2.0 * pi * c.qpm_order / c.poling_period).epsilon(1e-12));
}
