#include "bwspdc/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "bwspdc/constants.hpp"
#include "bwspdc/error.hpp"
#include "bwspdc/phasematch.hpp"

namespace bwspdc {

const char* to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::ConfigError: return "ConfigError";
    case ErrorCategory::IoError: return "IoError";
    case ErrorCategory::Unsupported: return "Unsupported";
    case ErrorCategory::OutOfRange: return "OutOfRange";
    case ErrorCategory::InvalidModel: return "InvalidModel";
    case ErrorCategory::NonPositiveDenominator:
      return "NonPositiveDenominator";
    case ErrorCategory::DegenerateForward: return "DegenerateForward";
    case ErrorCategory::ZeroDecay: return "ZeroDecay";
    case ErrorCategory::NoPositiveRoot: return "NoPositiveRoot";
    case ErrorCategory::MissingCalibration: return "MissingCalibration";
    case ErrorCategory::NotConverged: return "NotConverged";
    case ErrorCategory::ShootingDiverged: return "ShootingDiverged";
    case ErrorCategory::InvalidDuration: return "InvalidDuration";
    case ErrorCategory::EmptyStream: return "EmptyStream";
    case ErrorCategory::IncompatibleNormalization:
      return "IncompatibleNormalization";
  }
  return "Unknown";
}

namespace {

using nlohmann::json;

void require_known_keys(const json& obj, const std::set<std::string>& allowed,
                        const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      fail(ErrorCategory::ConfigError,
           "unknown key '" + it.key() + "' in " + where);
}

double get_number(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number())
    fail(ErrorCategory::ConfigError, key + " must be a number");
  return v.get<double>();
}

long get_integer(const json& obj, const std::string& key, long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    fail(ErrorCategory::ConfigError, key + " must be an integer");
  return v.get<long>();
}

Axis parse_axis(const json& obj, const std::string& key, Axis fallback) {
  if (!obj.contains(key)) return fallback;
  std::string s = obj.at(key).is_string() ? obj.at(key).get<std::string>()
                                          : std::string();
  if (s == "y") return Axis::Y;
  if (s == "z") return Axis::Z;
  fail(ErrorCategory::ConfigError, key + " must be \"y\" or \"z\"");
}

// number, or "auto"/null meaning unset
std::optional<double> parse_auto_number(const json& obj,
                                        const std::string& key) {
  if (!obj.contains(key)) return std::nullopt;
  const json& v = obj.at(key);
  if (v.is_null()) return std::nullopt;
  if (v.is_string() && v.get<std::string>() == "auto") return std::nullopt;
  if (v.is_number()) return v.get<double>();
  fail(ErrorCategory::ConfigError, key + " must be a number or \"auto\"");
}

std::optional<long> parse_auto_integer(const json& obj,
                                       const std::string& key) {
  if (!obj.contains(key)) return std::nullopt;
  const json& v = obj.at(key);
  if (v.is_null()) return std::nullopt;
  if (v.is_string() && v.get<std::string>() == "auto") return std::nullopt;
  if (v.is_number_integer()) return v.get<long>();
  fail(ErrorCategory::ConfigError, key + " must be an integer or \"auto\"");
}

json section(const json& j, const std::string& key) {
  if (!j.contains(key)) return json::object();
  if (!j.at(key).is_object())
    fail(ErrorCategory::ConfigError, "section '" + key + "' must be an object");
  return j.at(key);
}

json make_echo(const SourceConfig& c) {
  json j;
  json& crystal = j["crystal"];
  crystal["length_cm"] = c.length / units::cm;
  if (c.poling_period)
    crystal["poling_period_um"] = *c.poling_period / units::um;
  else
    crystal["poling_period_um"] = "auto";
  crystal["qpm_order"] = c.qpm_order;
  crystal["pump_axis"] = c.pump_axis == Axis::Y ? "y" : "z";
  crystal["signal_axis"] = c.signal_axis == Axis::Y ? "y" : "z";
  crystal["idler_axis"] = c.idler_axis == Axis::Y ? "y" : "z";
  crystal["geometry"] =
      c.geometry == Geometry::Backward ? "backward" : "forward";
  crystal["dispersion_file"] = c.dispersion_file;
  json& cavity = j["cavity"];
  cavity["r_signal"] = c.cavity.r_signal;
  cavity["r_idler"] = c.cavity.r_idler;
  cavity["loss_signal"] = c.cavity.xi_signal;
  cavity["loss_idler"] = c.cavity.xi_idler;
  if (c.cavity.mode_index_signal)
    cavity["mode_index_signal"] = *c.cavity.mode_index_signal;
  else
    cavity["mode_index_signal"] = "auto";
  if (c.cavity.mode_index_idler)
    cavity["mode_index_idler"] = *c.cavity.mode_index_idler;
  else
    cavity["mode_index_idler"] = "auto";
  json& pump = j["pump"];
  pump["wavelength_nm"] = c.pump_wavelength / units::nm;
  pump["power_mw"] = c.pump_power / units::mW;
  json& cal = j["calibration"];
  if (c.calibration.pair_rate_per_watt)
    cal["pair_rate_per_watt"] = *c.calibration.pair_rate_per_watt;
  if (c.calibration.kappa1) cal["kappa1_rad_s"] = *c.calibration.kappa1;
  cal["eta_signal"] = c.eta_signal;
  cal["eta_idler"] = c.eta_idler;
  json& grids = j["grids"];
  grids["spectrum_halfwidth_linewidths"] = c.grids.spectrum_halfwidth;
  grids["spectrum_points"] = c.grids.spectrum_points;
  grids["g2_halfwidth_coherences"] = c.grids.g2_halfwidth;
  grids["g2_points"] = c.grids.g2_points;
  json& events = j["events"];
  events["duration_s"] = c.events.duration;
  events["seed"] = c.events.seed;
  events["window_ns"] = c.events.window / units::ns;
  events["bin_width_ns"] = c.events.bin_width / units::ns;
  if (c.events.rate_override)
    events["rate_override_hz"] = *c.events.rate_override;
  json& output = j["output"];
  output["directory"] = c.output.directory;
  json formats = json::array();
  if (c.output.csv) formats.push_back("csv");
  if (c.output.svg) formats.push_back("svg");
  output["formats"] = formats;
  return j;
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCategory::IoError, "cannot open " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded())
    fail(ErrorCategory::ConfigError, path + " is not valid JSON");
  return j;
}

SourceConfig parse_config(const json& j) {
  if (!j.is_object())
    fail(ErrorCategory::ConfigError, "config root must be an object");
  require_known_keys(j,
                     {"crystal", "cavity", "pump", "calibration", "grids",
                      "events", "output"},
                     "config root");
  SourceConfig c;

  json crystal = section(j, "crystal");
  require_known_keys(crystal,
                     {"length_cm", "poling_period_um", "qpm_order",
                      "pump_axis", "signal_axis", "idler_axis", "geometry",
                      "dispersion_file", "temperature_c"},
                     "crystal");
  if (crystal.contains("temperature_c"))
    fail(ErrorCategory::Unsupported,
         "temperature-dependent dispersion is not supported");
  c.length = get_number(crystal, "length_cm", c.length / units::cm) * units::cm;
  if (auto p = parse_auto_number(crystal, "poling_period_um"))
    c.poling_period = *p * units::um;
  c.qpm_order = static_cast<int>(
      get_integer(crystal, "qpm_order", c.qpm_order));
  c.pump_axis = parse_axis(crystal, "pump_axis", c.pump_axis);
  c.signal_axis = parse_axis(crystal, "signal_axis", c.signal_axis);
  c.idler_axis = parse_axis(crystal, "idler_axis", c.idler_axis);
  if (crystal.contains("geometry")) {
    std::string g = crystal.at("geometry").is_string()
                        ? crystal.at("geometry").get<std::string>()
                        : std::string();
    if (g == "backward")
      c.geometry = Geometry::Backward;
    else if (g == "forward")
      c.geometry = Geometry::Forward;
    else
      fail(ErrorCategory::ConfigError,
           "geometry must be \"backward\" or \"forward\"");
  }
  if (crystal.contains("dispersion_file")) {
    if (!crystal.at("dispersion_file").is_string())
      fail(ErrorCategory::ConfigError, "dispersion_file must be a string");
    c.dispersion_file = crystal.at("dispersion_file").get<std::string>();
  }

  json cavity = section(j, "cavity");
  require_known_keys(cavity,
                     {"r_signal", "r_idler", "loss_signal", "loss_idler",
                      "mode_index_signal", "mode_index_idler"},
                     "cavity");
  c.cavity.r_signal = get_number(cavity, "r_signal", c.cavity.r_signal);
  c.cavity.r_idler = get_number(cavity, "r_idler", c.cavity.r_idler);
  c.cavity.xi_signal = get_number(cavity, "loss_signal", c.cavity.xi_signal);
  c.cavity.xi_idler = get_number(cavity, "loss_idler", c.cavity.xi_idler);
  c.cavity.mode_index_signal = parse_auto_integer(cavity, "mode_index_signal");
  c.cavity.mode_index_idler = parse_auto_integer(cavity, "mode_index_idler");

  json pump = section(j, "pump");
  require_known_keys(pump, {"wavelength_nm", "power_mw"}, "pump");
  c.pump_wavelength =
      get_number(pump, "wavelength_nm", c.pump_wavelength / units::nm) *
      units::nm;
  c.pump_power =
      get_number(pump, "power_mw", c.pump_power / units::mW) * units::mW;
  if (!(c.pump_wavelength > 0.0))
    fail(ErrorCategory::ConfigError, "pump wavelength must be positive");
  if (!(c.pump_power >= 0.0))
    fail(ErrorCategory::ConfigError, "pump power must be >= 0");

  json cal = section(j, "calibration");
  require_known_keys(
      cal, {"pair_rate_per_watt", "kappa1_rad_s", "eta_signal", "eta_idler"},
      "calibration");
  if (cal.contains("pair_rate_per_watt") &&
      !cal.at("pair_rate_per_watt").is_null())
    c.calibration.pair_rate_per_watt =
        get_number(cal, "pair_rate_per_watt", 0.0);
  if (cal.contains("kappa1_rad_s") && !cal.at("kappa1_rad_s").is_null())
    c.calibration.kappa1 = get_number(cal, "kappa1_rad_s", 0.0);
  c.eta_signal = get_number(cal, "eta_signal", c.eta_signal);
  c.eta_idler = get_number(cal, "eta_idler", c.eta_idler);

  json grids = section(j, "grids");
  require_known_keys(grids,
                     {"spectrum_halfwidth_linewidths", "spectrum_points",
                      "g2_halfwidth_coherences", "g2_points"},
                     "grids");
  c.grids.spectrum_halfwidth = get_number(
      grids, "spectrum_halfwidth_linewidths", c.grids.spectrum_halfwidth);
  c.grids.spectrum_points = static_cast<int>(
      get_integer(grids, "spectrum_points", c.grids.spectrum_points));
  c.grids.g2_halfwidth =
      get_number(grids, "g2_halfwidth_coherences", c.grids.g2_halfwidth);
  c.grids.g2_points =
      static_cast<int>(get_integer(grids, "g2_points", c.grids.g2_points));
  if (c.grids.spectrum_points < 9 || c.grids.g2_points < 9)
    fail(ErrorCategory::ConfigError, "grids need at least 9 points");
  if (!(c.grids.spectrum_halfwidth > 0.0) || !(c.grids.g2_halfwidth > 0.0))
    fail(ErrorCategory::ConfigError, "grid halfwidths must be positive");

  json events = section(j, "events");
  require_known_keys(events,
                     {"duration_s", "seed", "window_ns", "bin_width_ns",
                      "rate_override_hz"},
                     "events");
  c.events.duration = get_number(events, "duration_s", c.events.duration);
  if (events.contains("seed")) {
    const json& v = events.at("seed");
    if (!v.is_number_unsigned() && !v.is_number_integer())
      fail(ErrorCategory::ConfigError, "seed must be a non-negative integer");
    long long s = v.get<long long>();
    if (s < 0)
      fail(ErrorCategory::ConfigError, "seed must be a non-negative integer");
    c.events.seed = static_cast<std::uint64_t>(s);
  }
  c.events.window =
      get_number(events, "window_ns", c.events.window / units::ns) * units::ns;
  c.events.bin_width =
      get_number(events, "bin_width_ns", c.events.bin_width / units::ns) *
      units::ns;
  if (events.contains("rate_override_hz") &&
      !events.at("rate_override_hz").is_null())
    c.events.rate_override = get_number(events, "rate_override_hz", 0.0);

  json output = section(j, "output");
  require_known_keys(output, {"directory", "formats"}, "output");
  if (output.contains("directory")) {
    if (!output.at("directory").is_string())
      fail(ErrorCategory::ConfigError, "output directory must be a string");
    c.output.directory = output.at("directory").get<std::string>();
  }
  if (output.contains("formats")) {
    const json& f = output.at("formats");
    if (!f.is_array())
      fail(ErrorCategory::ConfigError, "formats must be an array");
    c.output.csv = false;
    c.output.svg = false;
    for (const auto& e : f) {
      std::string s = e.is_string() ? e.get<std::string>() : std::string();
      if (s == "csv")
        c.output.csv = true;
      else if (s == "svg")
        c.output.svg = true;
      else
        fail(ErrorCategory::ConfigError,
             "formats entries must be \"csv\" or \"svg\"");
    }
  }

  c.echo = make_echo(c);
  return c;
}

SourceConfig load_config_file(const std::string& path) {
  return parse_config(load_json_file(path));
}

void apply_override(json& j, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    fail(ErrorCategory::ConfigError,
         "override must look like section.key=value");
  std::string path = assignment.substr(0, eq);
  std::string value = assignment.substr(eq + 1);
  std::string pointer = "/";
  for (char ch : path) pointer += ch == '.' ? '/' : ch;
  json parsed = json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;
  try {
    j[json::json_pointer(pointer)] = parsed;
  } catch (const json::exception& e) {
    fail(ErrorCategory::ConfigError,
         "cannot apply override '" + assignment + "': " + e.what());
  }
}

std::uint64_t config_hash(const json& j) {
  std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash_hex(const json& j) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(config_hash(j)));
  return buf;
}

Scenario build_scenario(const SourceConfig& config,
                        const std::string& base_dir) {
  Scenario s;
  s.config = config;

  std::filesystem::path disp_path(config.dispersion_file);
  if (disp_path.is_relative() && !base_dir.empty())
    disp_path = std::filesystem::path(base_dir) / disp_path;

  s.crystal.length = config.length;
  s.crystal.qpm_order = config.qpm_order;
  s.crystal.pump_axis = config.pump_axis;
  s.crystal.signal_axis = config.signal_axis;
  s.crystal.idler_axis = config.idler_axis;
  s.crystal.geometry = config.geometry;
  s.crystal.dispersion = load_dispersion_file(disp_path.string());

  s.omega_pump = omega_from_wavelength(config.pump_wavelength);
  if (config.poling_period)
    s.crystal.poling_period = *config.poling_period;
  else
    s.crystal.poling_period = qpm_poling_period(
        s.crystal, config.pump_wavelength, 2.0 * config.pump_wavelength);
  validate_crystal(s.crystal);

  s.omega_center = phasematched_center(s.crystal, s.omega_pump);
  s.rates = decay_rates(config.cavity, s.crystal, s.omega_pump,
                        s.omega_center);
  s.mode_pair = resolve_mode_pair(config.cavity, s.rates, s.omega_pump);
  s.delta_k_prime =
      delta_k(s.crystal, s.mode_pair.Omega_signal, s.omega_pump);
  if (config.calibration.pair_rate_per_watt || config.calibration.kappa1)
    s.kappa1 = kappa1_from_pump(config.pump_power, config.calibration,
                                s.rates, s.delta_k_prime, s.crystal.length);
  return s;
}

std::complex<double> scenario_kappa1(const Scenario& scenario) {
  if (!scenario.kappa1)
    fail(ErrorCategory::MissingCalibration,
         "config carries neither pair_rate_per_watt nor kappa1_rad_s");
  return *scenario.kappa1;
}

}  // namespace bwspdc
