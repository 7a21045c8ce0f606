#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "rotmorse/eigensystem.hpp"
#include "rotmorse/molecule.hpp"

namespace rotmorse {

using Complex = std::complex<double>;

/// SU(2) displacement-operator coherent state on the bound ladder 0..n_prime.
struct CoherentState {
  RotationalChannel channel;
  double alpha = 2.15;
  int n_prime = 0;
  std::vector<double> coeffs;       ///< d_n for n = 0..n_prime, unit sum of squares
  std::vector<EigenLevel> levels;   ///< matching levels 0..n_prime
  int peak_index = 0;               ///< argmax_n |d_n|^2
  std::vector<int> active;          ///< levels whose weight is not negligible

  double weight(int n) const { return coeffs[n] * coeffs[n]; }
};

/// Weights below this fraction of the largest |d_n| are skipped when states
/// are assembled; their contribution is under double-precision resolution.
inline constexpr double kNegligibleCoefficient = 1e-16;

/// d_n = (-alpha)^{n'-n}/(n'-n)! [n'! Gamma(2 lb - n) / (n! Gamma(2 lb - n'))]^{1/2},
/// evaluated in log magnitude and renormalized.  n_prime defaults to n_max.
/// Throws std::invalid_argument for alpha == 0 or n_prime outside 0..n_max.
CoherentState build_cs(const RotationalChannel& channel, double alpha,
                       std::optional<int> n_prime = std::nullopt);

/// A coherent state propagated to time t and sampled on a radial grid.
struct EvolvedState {
  RadialGrid grid;
  double t = 0.0;
  std::vector<Complex> amplitudes;
  double norm_defect = 0.0;  ///< |1 - integral |Phi|^2 dr|
};

/// Caches the active eigenfunctions of a coherent state on one grid so that
/// many times (or many per-level phase patterns) can be assembled cheaply.
class PacketEvaluator {
 public:
  PacketEvaluator(const CoherentState& cs, const RadialGrid& grid);

  /// Phi(r, t) = sum_n d_n psi_n(r) exp(-i E_n t).
  EvolvedState at(double t) const;

  /// sum_n d_n factor_n psi_n(r) for an arbitrary per-level factor, indexed by n.
  EvolvedState assemble(std::span<const Complex> factors, double t) const;

  const RadialGrid& grid() const { return grid_; }
  const CoherentState& state() const { return cs_; }

 private:
  CoherentState cs_;
  RadialGrid grid_;
  std::vector<std::vector<double>> basis_;  // parallel to cs_.active
};

EvolvedState evolve(const CoherentState& cs, double t, const RadialGrid& grid);

/// |Phi(r, t)|^2 per grid point.
std::vector<double> density(const EvolvedState& state);

/// Classical period 2 pi / |dE/dn| at (possibly fractional) level n.
double classical_period(const RotationalChannel& channel, double n);

/// Revival time 2 pi lambda^2 / c2.
double revival_time(const RotationalChannel& channel);

struct Periods {
  double t_cl_ground = 0.0;  ///< classical period at n = 0
  double t_cl_center = 0.0;  ///< classical period at the packet's peak level
  double t_rev = 0.0;
};

Periods periods(const CoherentState& cs);

struct RevivalEntry {
  int r = 0;
  int s = 0;
  double t = 0.0;     ///< (r/s) T_rev
  int fragments = 0;  ///< s/2 for even s, s for odd s
};

/// Every reduced fraction r/s in (0, 1) with 2 <= s <= s_max, ordered by s then r.
std::vector<RevivalEntry> revival_catalog(const CoherentState& cs, int s_max);

/// A(t) = sum_n |d_n|^2 exp(-i E_n t).
std::vector<Complex> autocorrelation(const CoherentState& cs, std::span<const double> times);

struct DensityPeaks {
  std::vector<double> positions;
  std::optional<double> mean_spacing;
};

/// Standard deviation of r under a density sampled on `grid`.
double position_spread(const RadialGrid& grid, std::span<const double> rho);

/// Peak positions of a density sampled on `grid` (5% threshold after 3-point smoothing).
DensityPeaks density_peaks(const RadialGrid& grid, std::span<const double> rho);

}  // namespace rotmorse
