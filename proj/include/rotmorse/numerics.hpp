#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace rotmorse::numerics {

struct RootResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
};

/// Root of f on [lo, hi] where f(lo) and f(hi) differ in sign.  Secant steps
/// are taken when they land inside the current bracket and shrink it by at
/// least half; otherwise the bracket is bisected.  Stops when |f| < f_tol or
/// the bracket is narrower than x_tol.
RootResult find_root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                               double f_tol, double x_tol, int max_iterations = 200);

/// Scans [lo, hi] in `samples` equal steps for the first sign change of f and
/// returns the sub-bracket containing it.
std::optional<std::pair<double, double>> first_sign_change(const std::function<double(double)>& f,
                                                           double lo, double hi, int samples);

/// Golden-section maximization on [lo, hi].
double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double x_tol);

/// Composite trapezoid rule for uniformly spaced samples.
double trapezoid(std::span<const double> y, double h);

/// Indices of local maxima of `f` after 3-point moving-average smoothing,
/// keeping those above `rel_threshold` times the smoothed global maximum.
/// Grid end points are never reported.  Flat tops report their first index.
std::vector<std::size_t> find_peaks(std::span<const double> f, double rel_threshold = 0.05);

/// Mean spacing between consecutive entries of an ascending list; nullopt for
/// fewer than two entries.
std::optional<double> mean_spacing(std::span<const double> positions);

/// Phase unwrapping: consecutive jumps larger than pi are folded by 2*pi.
std::vector<double> unwrap(std::span<const double> angles);

}  // namespace rotmorse::numerics
