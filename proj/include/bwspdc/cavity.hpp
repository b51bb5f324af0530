#pragma once

#include <optional>
#include <vector>

#include "bwspdc/phasematch.hpp"

namespace bwspdc {

// Monolithic cavity formed by coating the crystal end faces. One mirror of
// each band is a perfect reflector; r_* is the amplitude reflectivity of the
// output coupler and xi_* the distributed round-trip loss fraction.
struct CavitySpec {
  double r_signal = 1.0;
  double r_idler = 1.0;
  double xi_signal = 0.0;
  double xi_idler = 0.0;
  std::optional<long> mode_index_signal;  // empty: lock to pump degeneracy
  std::optional<long> mode_index_idler;
};

void validate_cavity(const CavitySpec& cavity);

// Axial mode spacing pi * c / (n_group * length).
double mode_spacing(double n_group, double length);

struct DecayRates {
  double spacing_signal = 0.0;  // rad/s
  double spacing_idler = 0.0;
  double gamma_signal = 0.0;  // output-coupling rate
  double gamma_idler = 0.0;
  double Gamma_signal = 0.0;  // total decay rate
  double Gamma_idler = 0.0;
  double finesse_signal = 0.0;
  double finesse_idler = 0.0;
};

// Output coupling gamma = spacing * (1 - r) and total decay
// Gamma = 2 * xi * spacing + gamma for each band. Fails with ZeroDecay when
// a band has neither output coupling nor loss (r = 1, xi = 0).
DecayRates decay_rates(const CavitySpec& cavity, const CrystalSpec& crystal,
                       double omega_pump, double omega_center);

// Coefficients of the cluster condition M * dW^2 + N * dW = +-1, whose
// smallest positive root dW is the spacing between doubly resonant mode
// pairs.
struct ClusterResult {
  double M = 0.0;  // s^2/rad^2 locked into the quadratic
  double N = 0.0;  // s/rad
  std::vector<double> positive_roots;  // ascending
  double spacing = 0.0;                // smallest positive root, rad/s
};

ClusterResult cluster_spacing(const CrystalSpec& crystal, double omega_pump,
                              double omega_center);

struct SingleModeCheck {
  bool single_mode = false;
  double margin = 0.0;  // cluster spacing / gain linewidth
};

SingleModeCheck single_mode_check(double cluster_spacing,
                                  double gain_linewidth);

// Doubly resonant mode pair the source operates on. Offsets record how far
// each lock point sits from the nearest exact comb line.
struct ModePair {
  double Omega_signal = 0.0;  // rad/s
  double Omega_idler = 0.0;
  long index_signal = 0;
  long index_idler = 0;
  double comb_offset_signal = 0.0;
  double comb_offset_idler = 0.0;
};

ModePair resolve_mode_pair(const CavitySpec& cavity, const DecayRates& rates,
                           double omega_pump);

}  // namespace bwspdc
