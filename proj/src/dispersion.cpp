#include "bwspdc/dispersion.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "bwspdc/constants.hpp"
#include "bwspdc/error.hpp"
#include "bwspdc/numerics.hpp"

namespace bwspdc {

const char* to_string(Axis a) { return a == Axis::Y ? "Y" : "Z"; }

Axis axis_from_string(const std::string& s) {
  if (s == "Y" || s == "y") return Axis::Y;
  if (s == "Z" || s == "z") return Axis::Z;
  fail(ErrorCategory::ConfigError, "unknown axis '" + s + "' (expected Y or Z)");
}

namespace {

struct F2 {
  double f;    // n^2
  double d1;   // d(n^2)/dlambda   (per um)
  double d2;   // d2(n^2)/dlambda2 (per um^2)
};

F2 n_squared(const SellmeierModel& m, double lam_um) {
  double l2 = lam_um * lam_um;
  double f = m.A - m.E * l2;
  double d1 = -2.0 * m.E * lam_um;
  double d2 = -2.0 * m.E;
  for (std::size_t j = 0; j < m.B.size(); ++j) {
    // OscillatorSum term B*l2/(l2-C) = B + B*C/(l2-C): same pole shape
    double b = (m.form == SellmeierForm::OscillatorSum) ? m.B[j] * m.C[j] : m.B[j];
    double den = l2 - m.C[j];
    if (den == 0.0)
      fail(ErrorCategory::OutOfRange, "wavelength coincides with Sellmeier pole");
    if (m.form == SellmeierForm::OscillatorSum) f += m.B[j];
    f += b / den;
    d1 += -2.0 * b * lam_um / (den * den);
    d2 += 2.0 * b * (3.0 * l2 + m.C[j]) / (den * den * den);
  }
  return {f, d1, d2};
}

double wavelength_um(double omega) {
  return wavelength_from_omega(omega) / units::um;
}

void check_range(const SellmeierModel& m, double omega, const char* what) {
  double lam = wavelength_um(omega);
  if (!(lam >= m.range_lo_um && lam <= m.range_hi_um))
    fail(ErrorCategory::OutOfRange,
         std::string(what) + ": wavelength " + std::to_string(lam) +
             " um outside model range [" + std::to_string(m.range_lo_um) + ", " +
             std::to_string(m.range_hi_um) + "] um");
}

}  // namespace

void validate_model(const SellmeierModel& m) {
  if (m.B.size() != m.C.size())
    fail(ErrorCategory::InvalidModel, "coefficient lists B and C differ in length");
  if (!(m.range_lo_um > 0.0) || !(m.range_hi_um > m.range_lo_um))
    fail(ErrorCategory::InvalidModel, "invalid wavelength validity range");
  for (double c : m.C)
    if (c >= m.range_lo_um * m.range_lo_um && c <= m.range_hi_um * m.range_hi_um)
      fail(ErrorCategory::InvalidModel, "Sellmeier pole inside the valid range");
  for (int i = 0; i <= 64; ++i) {
    double lam = m.range_lo_um + (m.range_hi_um - m.range_lo_um) * i / 64.0;
    double f = n_squared(m, lam).f;
    if (!(f > 1.0))
      fail(ErrorCategory::InvalidModel,
           "n(lambda) <= 1 at " + std::to_string(lam) + " um");
  }
}

double refractive_index(const SellmeierModel& m, double omega) {
  check_range(m, omega, "refractive_index");
  double f = n_squared(m, wavelength_um(omega)).f;
  if (!(f > 0.0))
    fail(ErrorCategory::InvalidModel, "n^2 <= 0 inside valid range");
  return std::sqrt(f);
}

DispersionSample dispersion_sample(const SellmeierModel& m, double omega,
                                   DerivativeMethod method) {
  DispersionSample s;
  s.omega = omega;
  if (method == DerivativeMethod::Analytic) {
    check_range(m, omega, "dispersion_sample");
    double lam = wavelength_um(omega);
    F2 f2 = n_squared(m, lam);
    double n = std::sqrt(f2.f);
    double dn_dlam = f2.d1 / (2.0 * n);
    double d2n_dlam2 = f2.d2 / (2.0 * n) - f2.d1 * f2.d1 / (4.0 * n * n * n);
    double dlam_dom = -lam / omega;             // um per rad/s
    double d2lam_dom2 = 2.0 * lam / (omega * omega);
    s.n = n;
    s.dn_domega = dn_dlam * dlam_dom;
    s.d2n_domega2 = d2n_dlam2 * dlam_dom * dlam_dom + dn_dlam * d2lam_dom2;
  } else {
    double h1 = 1e-4 * omega;
    double h2 = 1e-3 * omega;
    check_range(m, omega - h2, "dispersion_sample stencil");
    check_range(m, omega + h2, "dispersion_sample stencil");
    auto f = [&](double w) { return refractive_index(m, w); };
    s.n = refractive_index(m, omega);
    s.dn_domega = num::richardson_derivative(f, omega, h1);
    s.d2n_domega2 = num::central_second_derivative(f, omega, h2);
  }
  s.group_index = s.n + omega * s.dn_domega;
  s.group_velocity = c_light / s.group_index;
  return s;
}

const SellmeierModel& model_for_axis(const DispersionData& data, Axis axis) {
  return axis == Axis::Y ? data.y : data.z;
}

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      fail(ErrorCategory::ConfigError,
           "unknown key '" + it.key() + "' in " + where);
}

SellmeierModel parse_model(const json& rec, Axis axis, const std::string& where) {
  reject_unknown_keys(rec, {"form", "citation", "valid_range_um", "coefficients"}, where);
  SellmeierModel m;
  m.axis = axis;
  std::string form = rec.at("form").get<std::string>();
  if (form == "pole")
    m.form = SellmeierForm::PoleSum;
  else if (form == "oscillator")
    m.form = SellmeierForm::OscillatorSum;
  else
    fail(ErrorCategory::ConfigError, "unknown Sellmeier form '" + form + "' in " + where);
  m.citation = rec.value("citation", "");
  auto range = rec.at("valid_range_um");
  if (!range.is_array() || range.size() != 2)
    fail(ErrorCategory::ConfigError, "valid_range_um must be [lo, hi] in " + where);
  m.range_lo_um = range[0].get<double>();
  m.range_hi_um = range[1].get<double>();
  const json& co = rec.at("coefficients");
  reject_unknown_keys(co, {"A", "B", "C", "E"}, where + ".coefficients");
  m.A = co.at("A").get<double>();
  m.B = co.at("B").get<std::vector<double>>();
  m.C = co.at("C").get<std::vector<double>>();
  m.E = co.value("E", 0.0);
  validate_model(m);
  return m;
}

}  // namespace

DispersionData load_dispersion_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCategory::IoError, "cannot open dispersion file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCategory::ConfigError,
         "dispersion file " + path + " is not valid JSON: " + e.what());
  }
  reject_unknown_keys(doc, {"crystal", "axes"}, path);
  DispersionData data;
  data.crystal = doc.value("crystal", "");
  const json& axes = doc.at("axes");
  reject_unknown_keys(axes, {"Y", "Z"}, path + ".axes");
  data.y = parse_model(axes.at("Y"), Axis::Y, path + ".axes.Y");
  data.z = parse_model(axes.at("Z"), Axis::Z, path + ".axes.Z");
  return data;
}

}  // namespace bwspdc
