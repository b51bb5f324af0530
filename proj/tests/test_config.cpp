#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>

#include "bwspdc/config.hpp"
#include "bwspdc/constants.hpp"
#include "bwspdc/error.hpp"

using namespace bwspdc;
using doctest::Approx;
using nlohmann::json;

namespace {

const std::string root = BWSPDC_SOURCE_ROOT;
const std::string default_path = root + "/configs/default.json";

json default_json() { return load_json_file(default_path); }

ErrorCategory category_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.category();
  }
  FAIL("expected an error");
  return ErrorCategory::ConfigError;
}

}  // namespace

TEST_CASE("default config parses to the documented source") {
  auto cfg = load_config_file(default_path);
  CHECK(cfg.length == Approx(0.03));
  CHECK_FALSE(cfg.poling_period.has_value());  // "auto"
  CHECK(cfg.qpm_order == 3);
  CHECK(cfg.geometry == Geometry::Backward);
  CHECK(cfg.pump_wavelength == Approx(532e-9));
  CHECK(cfg.pump_power == Approx(0.77e-3));
  CHECK(cfg.cavity.r_signal == Approx(0.999));
  CHECK(cfg.cavity.xi_signal == 0.0);
  CHECK_FALSE(cfg.cavity.mode_index_signal.has_value());
  REQUIRE(cfg.calibration.pair_rate_per_watt.has_value());
  CHECK(*cfg.calibration.pair_rate_per_watt == Approx(1.31e5 / 0.77e-3));
  CHECK_FALSE(cfg.calibration.kappa1.has_value());
  CHECK(cfg.eta_signal == Approx(1.0 / std::sqrt(2.0)));
  CHECK(cfg.events.seed == 20260815);
  CHECK(cfg.events.duration == Approx(0.5));
  CHECK(cfg.events.window == Approx(600e-9));
  CHECK(cfg.events.bin_width == Approx(5e-9));
  CHECK_FALSE(cfg.events.rate_override.has_value());
  CHECK(cfg.grids.spectrum_points == 8001);
  CHECK(cfg.output.csv);
  CHECK(cfg.output.svg);
}

TEST_CASE("an empty config is all defaults") {
  auto cfg = parse_config(json::object());
  CHECK(cfg.length == Approx(0.03));
  CHECK(cfg.qpm_order == 3);
  CHECK_FALSE(cfg.calibration.pair_rate_per_watt.has_value());
}

TEST_CASE("unknown keys are rejected, not ignored") {
  json j = json::object();
  j["crystal"]["bogus"] = 1;
  CHECK(category_of([&] { parse_config(j); }) == ErrorCategory::ConfigError);
  json k = json::object();
  k["nonsense"] = true;
  CHECK(category_of([&] { parse_config(k); }) == ErrorCategory::ConfigError);
}

TEST_CASE("temperature-dependent dispersion is called out as unsupported") {
  json j = json::object();
  j["crystal"]["temperature_c"] = 25.0;
  CHECK(category_of([&] { parse_config(j); }) == ErrorCategory::Unsupported);
}

TEST_CASE("wrongly typed values are rejected") {
  json j = json::object();
  j["crystal"]["length_cm"] = "three";
  CHECK(category_of([&] { parse_config(j); }) == ErrorCategory::ConfigError);
  json k = json::object();
  k["crystal"]["geometry"] = "sideways";
  CHECK(category_of([&] { parse_config(k); }) == ErrorCategory::ConfigError);
}

TEST_CASE("overrides patch dotted paths with parsed values") {
  json j = default_json();
  apply_override(j, "cavity.r_signal=0.99");
  auto cfg = parse_config(j);
  CHECK(cfg.cavity.r_signal == Approx(0.99));

  apply_override(j, "crystal.geometry=forward");
  CHECK(parse_config(j).geometry == Geometry::Forward);

  apply_override(j, "events.rate_override_hz=250");
  CHECK(*parse_config(j).events.rate_override == Approx(250.0));

  CHECK(category_of([&] {
    json k = default_json();
    apply_override(k, "no-equals-sign");
  }) == ErrorCategory::ConfigError);
}

TEST_CASE("hashes are stable and sensitive") {
  json a = default_json();
  json b = default_json();
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash_hex(a).size() == 16);
  apply_override(b, "pump.power_mw=1.0");
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("the normalized echo reparses to the same normal form") {
  auto cfg = load_config_file(default_path);
  auto again = parse_config(cfg.echo);
  CHECK(config_hash(cfg.echo) == config_hash(again.echo));
  CHECK(again.length == Approx(cfg.length));
  CHECK(again.events.seed == cfg.events.seed);
}

TEST_CASE("scenario assembly wires the whole chain together") {
  auto cfg = load_config_file(default_path);
  auto s = build_scenario(cfg, root + "/configs");
  CHECK(s.omega_pump == Approx(omega_from_wavelength(532e-9)).epsilon(1e-12));
  CHECK(s.omega_center == Approx(s.omega_pump / 2.0).epsilon(1e-10));
  CHECK(s.crystal.poling_period == Approx(0.87175209e-6).epsilon(1e-6));
  CHECK(s.rates.Gamma_signal == Approx(2.0 * pi * 2.812031e6).epsilon(1e-6));
  CHECK(s.rates.Gamma_idler == Approx(2.0 * pi * 2.669362e6).epsilon(1e-6));
  CHECK(s.mode_pair.index_signal == 100198);
  CHECK(std::abs(s.delta_k_prime) < 1e-6);
  REQUIRE(s.kappa1.has_value());
  CHECK(std::abs(scenario_kappa1(s)) == Approx(1.06204039e6).epsilon(1e-6));
}

TEST_CASE("without calibration the scenario still designs the cavity") {
  json j = default_json();
  j.erase("calibration");
  auto s = build_scenario(parse_config(j), root + "/configs");
  CHECK(s.rates.Gamma_signal > 0.0);
  CHECK_FALSE(s.kappa1.has_value());
  CHECK(category_of([&] { scenario_kappa1(s); }) ==
        ErrorCategory::MissingCalibration);
}

TEST_CASE("a missing dispersion file is an io error") {
  json j = default_json();
  apply_override(j, "crystal.dispersion_file=missing.json");
  CHECK(category_of([&] {
    build_scenario(parse_config(j), root + "/configs");
  }) == ErrorCategory::IoError);
}

TEST_CASE("config file loading errors") {
  CHECK(category_of([&] { load_json_file(root + "/configs/none.json"); }) ==
        ErrorCategory::IoError);
  std::string bad = "/tmp/bwspdc_bad_config.json";
  std::ofstream(bad) << "{ not json";
  CHECK(category_of([&] { load_json_file(bad); }) ==
        ErrorCategory::ConfigError);
  std::remove(bad.c_str());
}
