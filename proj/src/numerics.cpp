#include "bwspdc/numerics.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "bwspdc/constants.hpp"
#include "bwspdc/error.hpp"

namespace bwspdc::num {

namespace {

double pairwise_range(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t half = n / 2;
  return pairwise_range(v, half) + pairwise_range(v + half, n - half);
}

}  // namespace

double pairwise_sum(const std::vector<double>& v) {
  return pairwise_range(v.data(), v.size());
}

double trapezoid(const std::vector<double>& y, double dx) {
  if (y.size() < 2) throw std::invalid_argument("trapezoid: need >= 2 samples");
  std::vector<double> panels(y.size() - 1);
  for (std::size_t i = 0; i + 1 < y.size(); ++i)
    panels[i] = 0.5 * (y[i] + y[i + 1]) * dx;
  return pairwise_sum(panels);
}

double trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
  if (n < 2) throw std::invalid_argument("trapezoid: need >= 2 points");
  double dx = (b - a) / (n - 1);
  std::vector<double> y(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = f(a + i * dx);
  return trapezoid(y, dx);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double rel_tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw std::invalid_argument("bisect: no sign change on bracket");
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= rel_tol * (std::abs(lo) + std::abs(hi) + 1e-300)) break;
  }
  return 0.5 * (lo + hi);
}

double full_width_at_level(const std::function<double(double)>& f, double x0,
                           double level, double step) {
  if (!(f(x0) > level))
    fail(ErrorCategory::NotConverged,
         "width search: the center already sits below the target level");
  auto crossing = [&](double dir) {
    double prev = x0;
    double x = x0 + dir * step;
    for (int i = 0; i < 120 && f(x) > level; ++i) {
      prev = x;
      x = x0 + 2.0 * (x - x0);  // double the displacement from the center
    }
    if (f(x) > level)
      fail(ErrorCategory::NotConverged,
           "width search: no level crossing within the expansion range");
    auto g = [&](double t) { return f(t) - level; };
    return bisect(g, std::min(prev, x), std::max(prev, x));
  };
  return crossing(+1.0) - crossing(-1.0);
}

double central_derivative(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

double central_second_derivative(const std::function<double(double)>& f, double x,
                                 double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

double richardson_derivative(const std::function<double(double)>& f, double x,
                             double h) {
  double d1 = central_derivative(f, x, h);
  double d2 = central_derivative(f, x, h / 2);
  return (4.0 * d2 - d1) / 3.0;
}

int quadratic_roots(double a, double b, double c, double r[2]) {
  if (a == 0.0) {
    if (b == 0.0) return 0;
    r[0] = -c / b;
    return 1;
  }
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return 0;
  double sq = std::sqrt(disc);
  double q = -0.5 * (b + (b >= 0 ? sq : -sq));
  // q = 0 only when b = 0 and disc = 0
  r[0] = (q != 0.0) ? q / a : 0.0;
  r[1] = (q != 0.0) ? c / q : 0.0;
  return 2;
}

namespace {

struct Moments {
  std::complex<double> m0, m1, m2;
};

// Int_{-h}^{h} x^k e^{i x tau} dx for k = 0, 1, 2 with theta = h*tau.
Moments panel_moments(double h, double tau) {
  double th = h * tau;
  Moments m;
  if (std::abs(th) < 0.05) {
    double t2 = th * th;
    double m0 = 1.0 - t2 / 6 + t2 * t2 / 120 - t2 * t2 * t2 / 5040;
    double m1 = th * (1.0 / 3 - t2 / 30 + t2 * t2 / 840 - t2 * t2 * t2 / 45360);
    double m2 = 1.0 / 3 - t2 / 10 + t2 * t2 / 168 - t2 * t2 * t2 / 6480;
    m.m0 = 2.0 * h * m0;
    m.m1 = std::complex<double>(0.0, 2.0 * h * h * m1);
    m.m2 = 2.0 * h * h * h * m2;
  } else {
    double s = std::sin(th);
    double c = std::cos(th);
    m.m0 = 2.0 * s / tau;
    m.m1 = std::complex<double>(0.0, 2.0 * (s - th * c) / (tau * tau));
    m.m2 = 2.0 * ((th * th - 2.0) * s + 2.0 * th * c) / (tau * tau * tau);
  }
  return m;
}

}  // namespace

std::complex<double> fourier_integral(
    const std::function<std::complex<double>(double)>& f,
    const std::vector<double>& panel_bounds, double tau) {
  std::vector<double> re, im;
  re.reserve(panel_bounds.size());
  im.reserve(panel_bounds.size());
  for (std::size_t k = 0; k + 1 < panel_bounds.size(); ++k) {
    double x0 = panel_bounds[k];
    double x2 = panel_bounds[k + 1];
    double mid = 0.5 * (x0 + x2);
    double h = 0.5 * (x2 - x0);
    std::complex<double> f0 = f(x0), f1 = f(mid), f2 = f(x2);
    Moments m = panel_moments(h, tau);
    std::complex<double> a = f1;
    std::complex<double> b = (f2 - f0) / (2.0 * h);
    std::complex<double> cq = (f0 - 2.0 * f1 + f2) / (2.0 * h * h);
    std::complex<double> phase = std::exp(std::complex<double>(0.0, mid * tau));
    std::complex<double> val = phase * (a * m.m0 + b * m.m1 + cq * m.m2);
    re.push_back(val.real());
    im.push_back(val.imag());
  }
  return std::complex<double>(pairwise_sum(re), pairwise_sum(im)) / (2.0 * pi);
}

std::vector<double> fourier_panels(double core_half, int core_panels,
                                   double tail_limit, int panels_per_decade) {
  std::vector<double> bounds;
  double decades = std::log10(tail_limit / core_half);
  int n_tail = static_cast<int>(std::ceil(decades * panels_per_decade));
  for (int k = n_tail; k >= 1; --k)
    bounds.push_back(-core_half * std::pow(10.0, decades * k / n_tail));
  for (int i = 0; i <= core_panels; ++i)
    bounds.push_back(core_half * (2.0 * i / core_panels - 1.0));
  for (int k = 1; k <= n_tail; ++k)
    bounds.push_back(core_half * std::pow(10.0, decades * k / n_tail));
  return bounds;
}

std::array<double, 2> weighted_line_fit(const std::vector<double>& x,
                                        const std::vector<double>& y,
                                        const std::vector<double>& w) {
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
    sxx += w[i] * x[i] * x[i];
    sxy += w[i] * x[i] * y[i];
  }
  double det = sw * sxx - sx * sx;
  if (det == 0.0 || sw == 0.0)
    throw std::invalid_argument("weighted_line_fit: singular system");
  double slope = (sw * sxy - sx * sy) / det;
  double icpt = (sy - slope * sx) / sw;
  return {icpt, slope};
}

}  // namespace bwspdc::num
