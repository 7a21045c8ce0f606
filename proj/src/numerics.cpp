#include "rotmorse/numerics.hpp"

#include <algorithm>
#include <stdexcept>

#include "rotmorse/units.hpp"

namespace rotmorse::numerics {

RootResult find_root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                               double f_tol, double x_tol, int max_iterations) {
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (f_lo == 0.0) return {lo, 0.0, 0};
  if (f_hi == 0.0) return {hi, 0.0, 0};
  if ((f_lo < 0.0) == (f_hi < 0.0)) {
    throw std::invalid_argument("find_root_bracketed: endpoints do not bracket a root");
  }

  RootResult best{std::abs(f_lo) < std::abs(f_hi) ? lo : hi,
                  std::abs(f_lo) < std::abs(f_hi) ? f_lo : f_hi, 0};
  for (int it = 1; it <= max_iterations; ++it) {
    const double width = hi - lo;
    double x = lo - f_lo * width / (f_hi - f_lo);
    const double mid = 0.5 * (lo + hi);
    // Accept the secant point only if it is strictly inside and not hugging an
    // end; a stalled side means bisection makes faster progress.
    const double margin = 0.05 * width;
    if (!(x > lo + margin && x < hi - margin)) x = mid;

    const double fx = f(x);
    best = {x, fx, it};
    if (std::abs(fx) < f_tol) return best;
    if ((fx < 0.0) == (f_lo < 0.0)) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
      f_hi = fx;
    }
    // Bisect outright when the secant step left the bracket wider than half.
    if (hi - lo > 0.5 * width) {
      const double m = 0.5 * (lo + hi);
      const double fm = f(m);
      best = {m, fm, it};
      if (std::abs(fm) < f_tol) return best;
      if ((fm < 0.0) == (f_lo < 0.0)) {
        lo = m;
        f_lo = fm;
      } else {
        hi = m;
        f_hi = fm;
      }
    }
    if (hi - lo < x_tol) {
      const bool lo_better = std::abs(f_lo) < std::abs(f_hi);
      return {lo_better ? lo : hi, lo_better ? f_lo : f_hi, it};
    }
  }
  return best;
}

std::optional<std::pair<double, double>> first_sign_change(const std::function<double(double)>& f,
                                                           double lo, double hi, int samples) {
  const double step = (hi - lo) / samples;
  double x_prev = lo;
  double f_prev = f(lo);
  for (int i = 1; i <= samples; ++i) {
    const double x = (i == samples) ? hi : lo + i * step;
    const double fx = f(x);
    if (f_prev == 0.0) return std::pair{x_prev, x_prev};
    if ((f_prev < 0.0) != (fx < 0.0) || fx == 0.0) return std::pair{x_prev, x};
    x_prev = x;
    f_prev = fx;
  }
  return std::nullopt;
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double x_tol) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > x_tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double trapezoid(std::span<const double> y, double h) {
  if (y.size() < 2) return 0.0;
  double sum = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) sum += y[i];
  return sum * h;
}

std::vector<std::size_t> find_peaks(std::span<const double> f, double rel_threshold) {
  const std::size_t n = f.size();
  std::vector<std::size_t> peaks;
  if (n < 3) return peaks;

  std::vector<double> g(n);
  g[0] = (f[0] + f[1]) / 2.0;
  g[n - 1] = (f[n - 2] + f[n - 1]) / 2.0;
  for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (f[i - 1] + f[i] + f[i + 1]) / 3.0;

  const double top = *std::max_element(g.begin(), g.end());
  if (!(top > 0.0)) return peaks;
  const double floor = rel_threshold * top;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (g[i] > g[i - 1] && g[i] >= g[i + 1] && g[i] > floor) peaks.push_back(i);
  }
  return peaks;
}

std::optional<double> mean_spacing(std::span<const double> positions) {
  if (positions.size() < 2) return std::nullopt;
  return (positions.back() - positions.front()) / static_cast<double>(positions.size() - 1);
}

std::vector<double> unwrap(std::span<const double> angles) {
  std::vector<double> out(angles.begin(), angles.end());
  double offset = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double jump = angles[i] - angles[i - 1];
    if (jump < -units::kPi) offset += units::kTwoPi;
    if (jump > units::kPi) offset -= units::kTwoPi;
    out[i] = angles[i] + offset;
  }
  return out;
}

}  // namespace rotmorse::numerics
