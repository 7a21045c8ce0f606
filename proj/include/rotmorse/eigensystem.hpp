#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rotmorse/molecule.hpp"

namespace rotmorse {

/// One bound ro-vibrational level of a channel.
struct EigenLevel {
  int n = 0;
  int j = 0;
  double s = 0.0;         ///< lambda_bar - n - 1/2
  double energy = 0.0;    ///< hartree
  double log_norm = 0.0;  ///< ln of the normalization constant
};

/// Uniform radial sampling including both end points.
struct RadialGrid {
  double r_min = 4.2;
  double r_max = 7.0;
  std::size_t count = 2048;

  double spacing() const { return (r_max - r_min) / static_cast<double>(count - 1); }
  double at(std::size_t i) const { return r_min + static_cast<double>(i) * spacing(); }
  std::vector<double> points() const;

  /// Throws std::invalid_argument unless 0 < r_min < r_max and count >= 2.
  void validate() const;
};

/// Wavefunction samples plus |1 - integral psi^2 dr| as a grid-adequacy flag.
struct SampledLevel {
  std::vector<double> values;
  double norm_defect = 0.0;
};

/// E = 2 (c1/lambda)(n + 1/2) - (c2/lambda^2)(n + 1/2)^2 + c0 - c1^2/c2.
/// Throws std::out_of_range for n outside 0..n_max.
EigenLevel level(const RotationalChannel& channel, int n);

/// Generalized Laguerre polynomial L_n^a(y) by the three-term recurrence in n.
double laguerre(int n, double a, double y);

/// psi_n(r) = N e^{-y/2} y^s L_n^{2s}(y), assembled in log magnitude so that
/// Gamma(2 lambda_bar - n) never has to be formed.
double wavefunction(const RotationalChannel& channel, const EigenLevel& level, double r);

SampledLevel wavefunction_on_grid(const RotationalChannel& channel, int n, const RadialGrid& grid);

/// Widens `base` in 0.1 bohr steps (keeping its spacing) until every level
/// n <= n_hi has boundary amplitude below `rel_amplitude` of its own peak.
RadialGrid adequate_grid(const RotationalChannel& channel, int n_hi, const RadialGrid& base,
                         double rel_amplitude = 1e-10);

/// Overlap matrix <psi_n | psi_m> by trapezoid quadrature on `grid`, for
/// levels of two (possibly equal) channels.
std::vector<std::vector<double>> gram_matrix(const RotationalChannel& bra, int n_bra,
                                             const RotationalChannel& ket, int n_ket,
                                             const RadialGrid& grid);

/// Lowest k+1 eigenvalues of the three-point finite-difference Hamiltonian
/// -1/(2 mu) d^2/dr^2 + V_eff(r) with Dirichlet ends, using the exact
/// effective potential.  Independent of the analytic spectrum.
std::vector<double> fd_spectrum_oracle(const MoleculeParams& params, int j, const RadialGrid& grid,
                                       int k);

}  // namespace rotmorse
