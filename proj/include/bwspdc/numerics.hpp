#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace bwspdc::num {

inline double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// Pairwise (cascade) summation: deterministic and O(eps*log n) error.
double pairwise_sum(const std::vector<double>& v);

// Trapezoid rule on a uniform grid [a, b] with n points (n >= 2), panel
// contributions combined by pairwise summation.
double trapezoid(const std::function<double(double)>& f, double a, double b, int n);
double trapezoid(const std::vector<double>& y, double dx);

// Root of f on [lo, hi] by bisection; requires a sign change. Relative
// tolerance on the bracket width.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double rel_tol = 1e-13);

// Full width of the bump of f around x0 at the absolute threshold `level`.
// Starts `step` away from x0 and doubles the displacement until the value
// drops below the threshold on each side, then bisects the crossing.
double full_width_at_level(const std::function<double(double)>& f, double x0,
                           double level, double step);

// Central difference with one Richardson step: (4 D(h/2) - D(h)) / 3.
double richardson_derivative(const std::function<double(double)>& f, double x, double h);
// Plain central difference, exposed for the step-halving self-test.
double central_derivative(const std::function<double(double)>& f, double x, double h);
double central_second_derivative(const std::function<double(double)>& f, double x, double h);

// Stable real roots of a*x^2 + b*x + c = 0; returns count (coincident pair
// counts as 2). Degenerate a == 0 falls back to the linear root.
int quadratic_roots(double a, double b, double c, double r[2]);

template <typename T, std::size_t N>
std::array<T, N> axpy(const std::array<T, N>& y, const std::array<T, N>& x, double a) {
  std::array<T, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = y[i] + a * x[i];
  return r;
}

// Classic fixed-step RK4 over a small state vector.
template <typename T, std::size_t N, typename Rhs>
std::array<T, N> rk4_integrate(std::array<T, N> y, double t0, double h,
                               long n_steps, Rhs&& rhs) {
  for (long i = 0; i < n_steps; ++i) {
    double t = t0 + i * h;
    auto k1 = rhs(t, y);
    auto k2 = rhs(t + h / 2, axpy(y, k1, h / 2));
    auto k3 = rhs(t + h / 2, axpy(y, k2, h / 2));
    auto k4 = rhs(t + h, axpy(y, k3, h));
    for (std::size_t j = 0; j < N; ++j)
      y[j] += h / 6 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  }
  return y;
}

// Oscillatory Fourier integral (1/2pi) * Int f(x) e^{i x tau} dx over panel
// bounds. Each panel interpolates f quadratically at its endpoints/midpoint
// and integrates the interpolant against e^{i x tau} exactly (Filon-Simpson).
std::complex<double> fourier_integral(
    const std::function<std::complex<double>(double)>& f,
    const std::vector<double>& panel_bounds, double tau);

// Panel layout used for the G2 check: uniform core on [-core_half, core_half]
// plus geometric tails out to tail_limit on both sides.
std::vector<double> fourier_panels(double core_half, int core_panels,
                                   double tail_limit, int panels_per_decade);

// Weighted least-squares line fit y ~ a + b*x; returns {a, b}.
std::array<double, 2> weighted_line_fit(const std::vector<double>& x,
                                        const std::vector<double>& y,
                                        const std::vector<double>& w);

}  // namespace bwspdc::num
