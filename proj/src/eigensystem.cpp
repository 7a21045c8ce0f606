#include "rotmorse/eigensystem.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rotmorse/errors.hpp"
#include "rotmorse/numerics.hpp"

namespace rotmorse {

std::vector<double> RadialGrid::points() const {
  std::vector<double> r(count);
  for (std::size_t i = 0; i < count; ++i) r[i] = at(i);
  return r;
}

void RadialGrid::validate() const {
  if (!(r_min > 0.0 && r_min < r_max)) {
    throw std::invalid_argument("radial grid requires 0 < r_min < r_max");
  }
  if (count < 2) throw std::invalid_argument("radial grid requires at least two points");
}

EigenLevel level(const RotationalChannel& channel, int n) {
  if (n < 0 || n > channel.n_max) {
    throw std::out_of_range("level: n=" + std::to_string(n) + " outside bound range 0.." +
                            std::to_string(channel.n_max) + " for j=" + std::to_string(channel.j));
  }
  const double lb = channel.lambda_bar;
  const double nh = n + 0.5;
  const double lam = channel.lambda;

  EigenLevel lv;
  lv.n = n;
  lv.j = channel.j;
  lv.s = lb - n - 0.5;
  lv.energy = 2.0 * (channel.c1 / lam) * nh - (channel.c2 / (lam * lam)) * nh * nh + channel.c0 -
              channel.c1 * channel.c1 / channel.c2;
  lv.log_norm = 0.5 * (std::log(channel.beta) + std::log(2.0 * lb - 2.0 * n - 1.0) +
                       std::lgamma(n + 1.0) - std::lgamma(2.0 * lb - n));
  return lv;
}

namespace {

struct ScaledValue {
  double mantissa = 0.0;  ///< value = mantissa * exp(log_scale)
  double log_scale = 0.0;
};

// Same recurrence as laguerre(), rescaled whenever the iterates grow large so
// that deep-tail arguments (y in the thousands) stay finite.
ScaledValue laguerre_scaled(int n, double a, double y) {
  if (n == 0) return {1.0, 0.0};
  double prev = 1.0;
  double cur = 1.0 + a - y;
  double log_scale = 0.0;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + a + 1.0 - y) * cur - (k + a) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e150) {
      prev *= 1e-150;
      cur *= 1e-150;
      log_scale += 150.0 * std::log(10.0);
    }
  }
  return {cur, log_scale};
}

}  // namespace

double laguerre(int n, double a, double y) {
  if (n < 0) throw std::invalid_argument("laguerre: degree must be non-negative");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + a - y;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + a + 1.0 - y) * cur - (k + a) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double wavefunction(const RotationalChannel& channel, const EigenLevel& lv, double r) {
  const double y = channel.y_of_r(r);
  if (!(y > 0.0)) return 0.0;
  const ScaledValue lag = laguerre_scaled(lv.n, 2.0 * lv.s, y);
  if (lag.mantissa == 0.0) return 0.0;
  const double log_mag = lv.log_norm + lv.s * std::log(y) - 0.5 * y +
                         std::log(std::abs(lag.mantissa)) + lag.log_scale;
  const double mag = std::exp(log_mag);
  return lag.mantissa > 0.0 ? mag : -mag;
}

SampledLevel wavefunction_on_grid(const RotationalChannel& channel, int n, const RadialGrid& grid) {
  grid.validate();
  const EigenLevel lv = level(channel, n);
  SampledLevel out;
  out.values.resize(grid.count);
  std::vector<double> sq(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) {
    out.values[i] = wavefunction(channel, lv, grid.at(i));
    sq[i] = out.values[i] * out.values[i];
  }
  out.norm_defect = std::abs(1.0 - numerics::trapezoid(sq, grid.spacing()));
  return out;
}

RadialGrid adequate_grid(const RotationalChannel& channel, int n_hi, const RadialGrid& base,
                         double rel_amplitude) {
  base.validate();
  n_hi = std::min(n_hi, channel.n_max);
  const double h = base.spacing();
  const double step = 0.1;
  RadialGrid grid = base;

  for (int round = 0; round < 400; ++round) {
    bool widen_lo = false;
    bool widen_hi = false;
    for (int n = 0; n <= n_hi; ++n) {
      const auto sampled = wavefunction_on_grid(channel, n, grid);
      double peak = 0.0;
      for (double v : sampled.values) peak = std::max(peak, std::abs(v));
      if (std::abs(sampled.values.front()) >= rel_amplitude * peak) widen_lo = true;
      if (std::abs(sampled.values.back()) >= rel_amplitude * peak) widen_hi = true;
    }
    if (!widen_lo && !widen_hi) return grid;
    if (widen_lo) grid.r_min = std::max(grid.r_min - step, 0.5 * h);
    if (widen_hi) grid.r_max += step;
    grid.count = static_cast<std::size_t>(std::llround((grid.r_max - grid.r_min) / h)) + 1;
    grid.r_max = grid.r_min + h * static_cast<double>(grid.count - 1);
  }
  throw SolverError("adequate_grid: could not contain levels up to n=" + std::to_string(n_hi));
}

std::vector<std::vector<double>> gram_matrix(const RotationalChannel& bra, int n_bra,
                                             const RotationalChannel& ket, int n_ket,
                                             const RadialGrid& grid) {
  std::vector<std::vector<double>> left;
  std::vector<std::vector<double>> right;
  for (int n = 0; n <= n_bra; ++n) left.push_back(wavefunction_on_grid(bra, n, grid).values);
  for (int m = 0; m <= n_ket; ++m) right.push_back(wavefunction_on_grid(ket, m, grid).values);

  std::vector<std::vector<double>> gram(n_bra + 1, std::vector<double>(n_ket + 1));
  std::vector<double> prod(grid.count);
  for (int n = 0; n <= n_bra; ++n) {
    for (int m = 0; m <= n_ket; ++m) {
      for (std::size_t i = 0; i < grid.count; ++i) prod[i] = left[n][i] * right[m][i];
      gram[n][m] = numerics::trapezoid(prod, grid.spacing());
    }
  }
  return gram;
}

std::vector<double> fd_spectrum_oracle(const MoleculeParams& params, int j, const RadialGrid& grid,
                                       int k) {
  grid.validate();
  if (k < 0 || k > 30) throw std::invalid_argument("fd_spectrum_oracle: k must be in 0..30");
  if (grid.count < static_cast<std::size_t>(k) + 4) {
    throw std::invalid_argument("fd_spectrum_oracle: grid too small for requested levels");
  }
  const auto interior = static_cast<Eigen::Index>(grid.count - 2);
  const double h = grid.spacing();
  const double kinetic = 1.0 / (2.0 * params.mu * h * h);

  Eigen::VectorXd diag(interior);
  Eigen::VectorXd off(interior - 1);
  for (Eigen::Index i = 0; i < interior; ++i) {
    diag[i] = 2.0 * kinetic + effective_potential(params, j, grid.at(static_cast<std::size_t>(i) + 1));
  }
  off.setConstant(-kinetic);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw SolverError("fd_spectrum_oracle: tridiagonal eigensolver did not converge for j=" +
                      std::to_string(j));
  }
  const auto& ev = solver.eigenvalues();  // ascending
  return {ev.data(), ev.data() + k + 1};
}

}  // namespace rotmorse
