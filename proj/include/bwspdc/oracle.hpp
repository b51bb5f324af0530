#pragma once

#include <complex>
#include <vector>

#include "bwspdc/cavity.hpp"

namespace bwspdc {

// Independent numerical checks of the closed-form machinery: a time-domain
// integration of the coupled cavity envelopes and a spatial integration of
// the coupled-wave equations through the crystal.

enum class Integrator { RK4, AdaptiveRK4 };

struct SeededRun {
  double detuning = 0.0;  // rad/s, drive frequency relative to the mode pair
  std::complex<double> seed_signal{0.0, 0.0};  // b_s_in envelope amplitude
  std::complex<double> seed_idler{0.0, 0.0};   // b_i_dag_in envelope amplitude
  double duration = 0.0;  // s; 0 selects 50 / min(Gamma)
  double step = 0.0;      // s; 0 selects 1 / (100 max(Gamma, |detuning|))
  Integrator integrator = Integrator::RK4;
  bool record_trace = false;
};

struct TracePoint {
  double t = 0.0;
  double abs_signal = 0.0;
  double abs_idler = 0.0;
};

struct TransferResult {
  std::complex<double> out_signal{0.0, 0.0};  // output envelope amplitudes
  std::complex<double> out_idler{0.0, 0.0};
  double drift = 0.0;  // relative envelope change over the last 10%
  long steps = 0;
  std::vector<TracePoint> trace;
};

// Drives the two-mode cavity equations with monochromatic inputs at the given
// detuning and reads off the steady-state output envelopes. Fails with
// NotConverged when the envelope still drifts by more than 1e-9 over the
// final tenth of the run.
TransferResult cavity_transfer_oracle(const DecayRates& rates,
                                      std::complex<double> kappa1,
                                      const SeededRun& run);

struct SpatialMap {
  std::complex<double> A{0.0, 0.0}, B{0.0, 0.0}, C{0.0, 0.0}, D{0.0, 0.0};
};

// Integrates the counter-propagating coupled-wave equations across the
// crystal and converts the two-point boundary problem into the input/output
// map. Fails with ShootingDiverged at or beyond the oscillation threshold
// where the boundary problem loses its solution.
SpatialMap spatial_coupling_oracle(double kappa, double delta_k,
                                   double length, double k_signal,
                                   double k_idler, long steps = 4000);

}  // namespace bwspdc
