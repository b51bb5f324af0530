#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "bwspdc/biphoton.hpp"

namespace bwspdc {

struct GridSpec {
  double spectrum_halfwidth = 40.0;  // in closed-form linewidths
  int spectrum_points = 8001;
  double g2_halfwidth = 5.0;  // in coherence times
  int g2_points = 2001;
};

struct EventsSpec {
  double duration = 0.5;  // s
  std::uint64_t seed = 20260815;
  double window = 600e-9;     // coincidence half-window, s
  double bin_width = 5e-9;    // s
  std::optional<double> rate_override;  // pairs/s instead of the derived rate
};

struct OutputSpec {
  std::string directory = "out";
  bool csv = true;
  bool svg = true;
};

struct SourceConfig {
  // crystal
  double length = 0.03;                       // m
  std::optional<double> poling_period;        // m; empty = solve for it
  int qpm_order = 3;
  Axis pump_axis = Axis::Y;
  Axis signal_axis = Axis::Y;
  Axis idler_axis = Axis::Z;
  Geometry geometry = Geometry::Backward;
  std::string dispersion_file = "data/ktp_sellmeier.json";
  // cavity
  CavitySpec cavity;
  // pump
  double pump_wavelength = 532e-9;  // m
  double pump_power = 0.77e-3;      // W
  // calibration
  Kappa1Calibration calibration;
  double eta_signal = 1.0;
  double eta_idler = 1.0;

  GridSpec grids;
  EventsSpec events;
  OutputSpec output;

  nlohmann::json echo;  // normalized form of everything above
};

nlohmann::json load_json_file(const std::string& path);

// Strict parse: unknown keys anywhere are ConfigError, a crystal temperature
// is Unsupported. Absent keys keep their defaults.
SourceConfig parse_config(const nlohmann::json& j);

SourceConfig load_config_file(const std::string& path);

// Applies one "dotted.path=value" assignment; the value is parsed as JSON
// when possible and kept as a string otherwise.
void apply_override(nlohmann::json& j, const std::string& assignment);

// FNV-1a over the canonical (sorted-key, compact) serialization.
std::uint64_t config_hash(const nlohmann::json& j);
std::string config_hash_hex(const nlohmann::json& j);

// Everything derived from a config that the calculations need.
struct Scenario {
  SourceConfig config;
  CrystalSpec crystal;  // dispersion attached, poling period resolved
  double omega_pump = 0.0;
  double omega_center = 0.0;  // phase-matched signal frequency
  DecayRates rates;
  ModePair mode_pair;
  // set only when the config carries a calibration
  std::optional<std::complex<double>> kappa1;
  double delta_k_prime = 0.0;  // residual mismatch at the mode-pair lock
};

// The coupling rate, or MissingCalibration when the config had no way to fix
// it.
std::complex<double> scenario_kappa1(const Scenario& scenario);

// base_dir anchors a relative dispersion_file path (use the config file's
// directory).
Scenario build_scenario(const SourceConfig& config,
                        const std::string& base_dir);

}  // namespace bwspdc
