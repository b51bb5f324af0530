#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "bwspdc/constants.hpp"
#include "bwspdc/dispersion.hpp"
#include "bwspdc/error.hpp"

using namespace bwspdc;
using doctest::Approx;

namespace {

const DispersionData& ktp() {
  static DispersionData data = load_dispersion_file(
      std::string(BWSPDC_SOURCE_ROOT) + "/data/ktp_sellmeier.json");
  return data;
}

double omega_um(double lambda_um) {
  return omega_from_wavelength(lambda_um * units::um);
}

}  // namespace

TEST_CASE("refractive indices at the operating wavelengths") {
  CHECK(refractive_index(ktp().y, omega_um(1.064)) ==
        Approx(1.745468).epsilon(1e-5));
  CHECK(refractive_index(ktp().z, omega_um(1.064)) ==
        Approx(1.829669).epsilon(1e-5));
  CHECK(refractive_index(ktp().y, omega_um(0.532)) ==
        Approx(1.788695).epsilon(1e-5));
}

TEST_CASE("z axis is the slow axis at 1064 nm") {
  CHECK(refractive_index(ktp().z, omega_um(1.064)) >
        refractive_index(ktp().y, omega_um(1.064)));
}

TEST_CASE("group index and group velocity") {
  auto sy = dispersion_sample(ktp().y, omega_um(1.064));
  auto sz = dispersion_sample(ktp().z, omega_um(1.064));
  CHECK(sy.group_index == Approx(1.776844277).epsilon(1e-8));
  CHECK(sz.group_index == Approx(1.871811255).epsilon(1e-8));
  // normal dispersion: the pulse travels slower than the phase front
  CHECK(sy.group_index > sy.n);
  CHECK(sz.group_index > sz.n);
  CHECK(sy.group_velocity ==
        Approx(c_light / sy.group_index).epsilon(1e-12));
  CHECK(sy.group_index ==
        Approx(sy.n + sy.omega * sy.dn_domega).epsilon(1e-12));
}

TEST_CASE("analytic and finite-difference derivatives agree") {
  double w = omega_um(1.064);
  auto a = dispersion_sample(ktp().y, w, DerivativeMethod::Analytic);
  auto fd = dispersion_sample(ktp().y, w, DerivativeMethod::FiniteDifference);
  CHECK(fd.dn_domega == Approx(a.dn_domega).epsilon(1e-7));
  CHECK(fd.d2n_domega2 == Approx(a.d2n_domega2).epsilon(1e-4));
}

TEST_CASE("wavelengths outside the fitted range are rejected") {
  CHECK_THROWS_AS(refractive_index(ktp().y, omega_um(0.40)), Error);
  try {
    refractive_index(ktp().y, omega_um(3.60));
    FAIL("expected an out-of-range error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::OutOfRange);
  }
}

TEST_CASE("model_for_axis selects by polarization") {
  CHECK(model_for_axis(ktp(), Axis::Y).axis == Axis::Y);
  CHECK(model_for_axis(ktp(), Axis::Z).axis == Axis::Z);
}

TEST_CASE("malformed coefficient lists are rejected") {
  SellmeierModel m = ktp().y;
  m.B.push_back(1.0);  // now longer than C
  try {
    validate_model(m);
    FAIL("expected an invalid-model error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::InvalidModel);
  }
}

TEST_CASE("missing dispersion file raises an io error") {
  try {
    load_dispersion_file("/nonexistent/nowhere.json");
    FAIL("expected an io error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::IoError);
  }
}

TEST_CASE("axis names round-trip") {
  CHECK(axis_from_string("y") == Axis::Y);
  CHECK(axis_from_string("Z") == Axis::Z);
  CHECK(std::string(to_string(Axis::Y)) == "Y");
  CHECK_THROWS_AS(axis_from_string("x"), Error);
}
