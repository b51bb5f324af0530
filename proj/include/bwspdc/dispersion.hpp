#pragma once

#include <string>
#include <vector>

namespace bwspdc {

enum class Axis { Y, Z };

const char* to_string(Axis a);
Axis axis_from_string(const std::string& s);

// n^2(lambda) with lambda in micrometers:
//   PoleSum:        n^2 = A + sum_j B_j / (lambda^2 - C_j) - E * lambda^2
//   OscillatorSum:  n^2 = A + sum_j B_j * lambda^2 / (lambda^2 - C_j) - E * lambda^2
// C_j are pole positions in um^2.
enum class SellmeierForm { PoleSum, OscillatorSum };

struct SellmeierModel {
  Axis axis = Axis::Y;
  SellmeierForm form = SellmeierForm::PoleSum;
  double A = 1.0;
  std::vector<double> B;
  std::vector<double> C;
  double E = 0.0;
  double range_lo_um = 0.0;
  double range_hi_um = 0.0;
  std::string citation;
};

struct DispersionSample {
  double omega = 0.0;            // rad/s
  double n = 0.0;                // refractive index
  double dn_domega = 0.0;        // s/rad
  double d2n_domega2 = 0.0;      // s^2/rad^2
  double group_index = 0.0;      // n + omega * dn/domega
  double group_velocity = 0.0;   // m/s
};

enum class DerivativeMethod { Analytic, FiniteDifference };

// Throws InvalidModel if coefficients are malformed or n(lambda) <= 1
// somewhere in the valid range.
void validate_model(const SellmeierModel& model);

double refractive_index(const SellmeierModel& model, double omega);

DispersionSample dispersion_sample(const SellmeierModel& model, double omega,
                                   DerivativeMethod method = DerivativeMethod::Analytic);

struct DispersionData {
  SellmeierModel y;
  SellmeierModel z;
  std::string crystal;
};

const SellmeierModel& model_for_axis(const DispersionData& data, Axis axis);

DispersionData load_dispersion_file(const std::string& path);

}  // namespace bwspdc
