#include "bwspdc/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "bwspdc/constants.hpp"
#include "bwspdc/error.hpp"
#include "bwspdc/numerics.hpp"

namespace bwspdc {

namespace {

using State = std::array<std::complex<double>, 2>;
const std::complex<double> i1(0.0, 1.0);

struct EnvelopeRhs {
  double half_gs, half_gi;
  double root_gs, root_gi;
  std::complex<double> kappa1;
  double detuning;
  std::complex<double> seed_s, seed_i;

  State operator()(double t, const State& y) const {
    std::complex<double> drive = std::exp(-i1 * detuning * t);
    return State{-half_gs * y[0] - i1 * kappa1 * y[1] +
                     root_gs * seed_s * drive,
                 -half_gi * y[1] + i1 * kappa1 * y[0] +
                     root_gi * seed_i * drive};
  }
};

// One adaptive span: classic step-doubling RK4 with relative tolerance.
State integrate_adaptive(State y, double t0, double t1, double h0,
                         const EnvelopeRhs& rhs, long& steps) {
  double t = t0, h = h0;
  const double tol = 1e-12;
  while (t < t1) {
    h = std::min(h, t1 - t);
    State full = num::rk4_integrate(y, t, h, 1, rhs);
    State half = num::rk4_integrate(y, t, h / 2.0, 2, rhs);
    double err = 0.0, scale = 1e-300;
    for (int k = 0; k < 2; ++k) {
      err = std::max(err, std::abs(half[k] - full[k]));
      scale = std::max(scale, std::abs(half[k]));
    }
    double rel = err / scale;
    if (rel <= tol || h <= 1e-6 * h0) {
      y = half;
      t += h;
      steps += 3;
      if (rel < 0.1 * tol) h *= 2.0;
    } else {
      h *= 0.5;
    }
  }
  return y;
}

}  // namespace

TransferResult cavity_transfer_oracle(const DecayRates& rates,
                                      std::complex<double> kappa1,
                                      const SeededRun& run) {
  if (!(rates.Gamma_signal > 0.0) || !(rates.Gamma_idler > 0.0))
    fail(ErrorCategory::ZeroDecay, "decay rates must be positive");
  double gmin = std::min(rates.Gamma_signal, rates.Gamma_idler);
  double gmax = std::max(rates.Gamma_signal, rates.Gamma_idler);
  double duration = run.duration > 0.0 ? run.duration : 60.0 / gmin;
  double step =
      run.step > 0.0
          ? run.step
          : 1.0 / (100.0 * std::max(gmax, std::abs(run.detuning)));

  EnvelopeRhs rhs{rates.Gamma_signal / 2.0,
                  rates.Gamma_idler / 2.0,
                  std::sqrt(rates.gamma_signal),
                  std::sqrt(rates.gamma_idler),
                  kappa1,
                  run.detuning,
                  run.seed_signal,
                  run.seed_idler};

  TransferResult out;
  State y{std::complex<double>(0.0), std::complex<double>(0.0)};
  double t_mark = 0.9 * duration;
  State y_mark{};

  long n_total = static_cast<long>(std::ceil(duration / step));
  n_total = std::max<long>(n_total, 10);
  double h = duration / static_cast<double>(n_total);

  int trace_points = run.record_trace ? 512 : 0;
  if (run.integrator == Integrator::RK4) {
    long n_mark = static_cast<long>(std::llround(0.9 * n_total));
    if (trace_points > 0) {
      long done = 0;
      double t = 0.0;
      out.trace.push_back({0.0, 0.0, 0.0});
      for (int k = 1; k <= trace_points; ++k) {
        long upto = n_total * k / trace_points;
        if (done < n_mark && upto >= n_mark) {
          y = num::rk4_integrate(y, t, h, n_mark - done, rhs);
          t = h * n_mark;
          done = n_mark;
          y_mark = y;
        }
        if (upto > done) {
          y = num::rk4_integrate(y, t, h, upto - done, rhs);
          t = h * upto;
          done = upto;
        }
        out.trace.push_back({t, std::abs(y[0]), std::abs(y[1])});
      }
    } else {
      y = num::rk4_integrate(y, 0.0, h, n_mark, rhs);
      y_mark = y;
      y = num::rk4_integrate(y, h * n_mark, h, n_total - n_mark, rhs);
    }
    out.steps = n_total;
  } else {
    long steps = 0;
    y = integrate_adaptive(y, 0.0, t_mark, h, rhs, steps);
    y_mark = y;
    y = integrate_adaptive(y, t_mark, duration, h, rhs, steps);
    out.steps = steps;
  }

  // Remove the drive oscillation before comparing amplitudes.
  double t_end = run.integrator == Integrator::RK4
                     ? h * static_cast<double>(n_total)
                     : duration;
  std::complex<double> rot_end = std::exp(i1 * run.detuning * t_end);
  std::complex<double> rot_mark =
      std::exp(i1 * run.detuning *
               (run.integrator == Integrator::RK4
                    ? h * std::llround(0.9 * n_total)
                    : t_mark));
  State env_end{y[0] * rot_end, y[1] * rot_end};
  State env_mark{y_mark[0] * rot_mark, y_mark[1] * rot_mark};
  double scale = std::max({std::abs(env_end[0]), std::abs(env_end[1]),
                           1e-300});
  out.drift = std::max(std::abs(env_end[0] - env_mark[0]),
                       std::abs(env_end[1] - env_mark[1])) /
              scale;
  if (out.drift > 1e-9)
    fail(ErrorCategory::NotConverged,
         "envelope drift " + std::to_string(out.drift) +
             " over the final tenth of the run exceeds 1e-9");

  out.out_signal = rhs.root_gs * env_end[0] - run.seed_signal;
  out.out_idler = rhs.root_gi * env_end[1] - run.seed_idler;
  return out;
}

SpatialMap spatial_coupling_oracle(double kappa, double delta_k,
                                   double length, double k_signal,
                                   double k_idler, long steps) {
  if (!(length > 0.0))
    fail(ErrorCategory::ConfigError, "crystal length must be positive");
  if (steps < 16) fail(ErrorCategory::ConfigError, "too few steps");

  auto rhs = [&](double z, const State& y) {
    return State{i1 * kappa * y[1] * std::exp(i1 * delta_k * z),
                 i1 * kappa * y[0] * std::exp(-i1 * delta_k * z)};
  };
  double h = length / static_cast<double>(steps);
  State col0 = num::rk4_integrate(State{1.0, 0.0}, 0.0, h, steps, rhs);
  State col1 = num::rk4_integrate(State{0.0, 1.0}, 0.0, h, steps, rhs);
  std::complex<double> t11 = col0[0], t21 = col0[1];
  std::complex<double> t12 = col1[0], t22 = col1[1];
  for (auto v : {t11, t12, t21, t22})
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      fail(ErrorCategory::ShootingDiverged,
           "coupled-wave integration produced a non-finite transfer matrix");
  if (std::abs(t22) < 1e-8)
    fail(ErrorCategory::ShootingDiverged,
         "boundary problem is singular: the source is at or beyond the "
         "oscillation threshold");

  std::complex<double> phase_s = std::exp(i1 * k_signal * length);
  std::complex<double> phase_i = std::exp(i1 * k_idler * length);
  SpatialMap out;
  out.A = phase_s * (t11 - t12 * t21 / t22);
  out.B = phase_s * phase_i * (t12 / t22);
  out.C = -t21 / t22;
  out.D = phase_i / t22;
  return out;
}

}  // namespace bwspdc
