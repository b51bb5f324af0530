#pragma once

#include <numbers>

namespace bwspdc {

inline constexpr double c_light = 299792458.0;  // m/s
inline constexpr double pi = std::numbers::pi;

// Conversions between the conventional units used on the wire (nm, cm, mW,
// MHz, ns, spectroscopic cm^-1) and SI angular frequency / meters / watts.
// Everything internal is SI; these are the only conversion points.
namespace units {

inline constexpr double nm = 1e-9;
inline constexpr double um = 1e-6;
inline constexpr double cm = 1e-2;
inline constexpr double mW = 1e-3;
inline constexpr double ns = 1e-9;

}  // namespace units

inline constexpr double omega_from_wavelength(double lambda_m) {
  return 2.0 * pi * c_light / lambda_m;
}

inline constexpr double wavelength_from_omega(double omega) {
  return 2.0 * pi * c_light / omega;
}

// spectroscopic wavenumber: "2pi x W cm^-1" means omega = 2*pi*c*W*100
inline constexpr double omega_from_wavenumber_cm(double w_cm) {
  return 2.0 * pi * c_light * w_cm * 100.0;
}

inline constexpr double wavenumber_cm_from_omega(double omega) {
  return omega / (2.0 * pi * c_light * 100.0);
}

inline constexpr double hz_from_omega(double omega) { return omega / (2.0 * pi); }
inline constexpr double mhz_from_omega(double omega) { return omega / (2.0 * pi * 1e6); }
inline constexpr double ghz_from_omega(double omega) { return omega / (2.0 * pi * 1e9); }

}  // namespace bwspdc
