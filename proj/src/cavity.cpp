#include "bwspdc/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bwspdc/constants.hpp"
#include "bwspdc/error.hpp"
#include "bwspdc/numerics.hpp"

namespace bwspdc {

void validate_cavity(const CavitySpec& cavity) {
  auto check_band = [](double r, double xi, const char* band) {
    if (!(r > 0.0) || r > 1.0)
      fail(ErrorCategory::ConfigError,
           std::string(band) + " mirror reflectivity must be in (0, 1]");
    if (xi < 0.0 || xi >= 1.0)
      fail(ErrorCategory::ConfigError,
           std::string(band) + " round-trip loss must be in [0, 1)");
  };
  check_band(cavity.r_signal, cavity.xi_signal, "signal");
  check_band(cavity.r_idler, cavity.xi_idler, "idler");
  for (auto idx : {cavity.mode_index_signal, cavity.mode_index_idler})
    if (idx && *idx < 1)
      fail(ErrorCategory::ConfigError, "cavity mode index must be >= 1");
}

double mode_spacing(double n_group, double length) {
  if (!(n_group >= 1.0))
    fail(ErrorCategory::ConfigError, "group index must be >= 1");
  if (!(length > 0.0))
    fail(ErrorCategory::ConfigError, "cavity length must be positive");
  return pi * c_light / (n_group * length);
}

DecayRates decay_rates(const CavitySpec& cavity, const CrystalSpec& crystal,
                       double omega_pump, double omega_center) {
  validate_cavity(cavity);
  auto ng = [&](Axis axis, double omega) {
    return dispersion_sample(model_for_axis(crystal.dispersion, axis), omega)
        .group_index;
  };
  DecayRates out;
  out.spacing_signal =
      mode_spacing(ng(crystal.signal_axis, omega_center), crystal.length);
  out.spacing_idler = mode_spacing(
      ng(crystal.idler_axis, omega_pump - omega_center), crystal.length);
  out.gamma_signal = out.spacing_signal * (1.0 - cavity.r_signal);
  out.gamma_idler = out.spacing_idler * (1.0 - cavity.r_idler);
  out.Gamma_signal = 2.0 * cavity.xi_signal * out.spacing_signal +
                     out.gamma_signal;
  out.Gamma_idler = 2.0 * cavity.xi_idler * out.spacing_idler +
                    out.gamma_idler;
  if (!(out.Gamma_signal > 0.0) || !(out.Gamma_idler > 0.0))
    fail(ErrorCategory::ZeroDecay,
         "a band has neither output coupling nor loss; decay rate is zero");
  out.finesse_signal = out.spacing_signal / out.Gamma_signal;
  out.finesse_idler = out.spacing_idler / out.Gamma_idler;
  return out;
}

ClusterResult cluster_spacing(const CrystalSpec& crystal, double omega_pump,
                              double omega_center) {
  auto sample = [&](Axis axis, double omega) {
    return dispersion_sample(model_for_axis(crystal.dispersion, axis), omega);
  };
  auto s = sample(crystal.signal_axis, omega_center);
  auto i = sample(crystal.idler_axis, omega_pump - omega_center);
  // d(1/v_g)/domega for each band
  double k2s =
      (2.0 * s.dn_domega + s.omega * s.d2n_domega2) / c_light;
  double k2i =
      (2.0 * i.dn_domega + i.omega * i.d2n_domega2) / c_light;
  ClusterResult out;
  double l = crystal.length;
  out.N = l / (pi * c_light) * (s.group_index - i.group_index);
  out.M = l / (2.0 * pi) * (k2s + k2i);

  for (double rhs : {1.0, -1.0}) {
    double roots[2];
    int n = num::quadratic_roots(out.M, out.N, -rhs, roots);
    for (int j = 0; j < n; ++j) {
      double x = roots[j];
      if (!(x > 0.0)) continue;
      for (int it = 0; it < 8; ++it) {
        double f = out.M * x * x + out.N * x - rhs;
        double df = 2.0 * out.M * x + out.N;
        if (df == 0.0) break;
        double step = f / df;
        x -= step;
        if (std::abs(step) <= 1e-12 * std::abs(x)) break;
      }
      if (x > 0.0) out.positive_roots.push_back(x);
    }
  }
  std::sort(out.positive_roots.begin(), out.positive_roots.end());
  if (out.positive_roots.empty())
    fail(ErrorCategory::NoPositiveRoot,
         "cluster condition has no positive solution");
  out.spacing = out.positive_roots.front();
  return out;
}

SingleModeCheck single_mode_check(double cluster, double gain_linewidth) {
  if (!(gain_linewidth > 0.0))
    fail(ErrorCategory::ConfigError, "gain linewidth must be positive");
  SingleModeCheck out;
  out.margin = cluster / gain_linewidth;
  out.single_mode = out.margin > 1.0;
  return out;
}

ModePair resolve_mode_pair(const CavitySpec& cavity, const DecayRates& rates,
                           double omega_pump) {
  ModePair out;
  auto lock = [](double target, double spacing, long& index, double& offset) {
    index = std::lround(target / spacing);
    offset = target - static_cast<double>(index) * spacing;
  };
  bool have_s = cavity.mode_index_signal.has_value();
  bool have_i = cavity.mode_index_idler.has_value();
  if (have_s) {
    out.index_signal = *cavity.mode_index_signal;
    out.Omega_signal =
        static_cast<double>(out.index_signal) * rates.spacing_signal;
  }
  if (have_i) {
    out.index_idler = *cavity.mode_index_idler;
    out.Omega_idler =
        static_cast<double>(out.index_idler) * rates.spacing_idler;
  }
  if (!have_s) {
    double target = have_i ? omega_pump - out.Omega_idler : omega_pump / 2.0;
    out.Omega_signal = target;
    lock(target, rates.spacing_signal, out.index_signal,
         out.comb_offset_signal);
  }
  if (!have_i) {
    double target = have_s ? omega_pump - out.Omega_signal : omega_pump / 2.0;
    out.Omega_idler = target;
    lock(target, rates.spacing_idler, out.index_idler, out.comb_offset_idler);
  }
  if (!(out.Omega_signal > 0.0) || !(out.Omega_idler > 0.0) ||
      out.Omega_signal >= omega_pump || out.Omega_idler >= omega_pump)
    fail(ErrorCategory::ConfigError,
         "resolved mode pair lies outside the pump bandwidth");
  return out;
}

}  // namespace bwspdc
