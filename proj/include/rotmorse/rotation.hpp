#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rotmorse/eigensystem.hpp"
#include "rotmorse/molecule.hpp"
#include "rotmorse/wavepacket.hpp"

namespace rotmorse {

/// Eigenvalue m_n of the SU(2) projection generator used for the phase-space
/// rotation U = exp(i J0 phi).  The two choices differ by a constant, hence
/// only by a global phase.
enum class PhaseGenerator {
  projection,  ///< m = n - lambda_bar_0 + 1/2
  ladder,      ///< m = n
};

double generator_eigenvalue(const RotationalChannel& reference, int n, PhaseGenerator gen);

/// chi(r, t) = sum_n d_n^0 exp(i m_n phi) psi_{n,0}(r) exp(-i E_{n,0} t).
EvolvedState rotated_reference(const CoherentState& cs0, double phi, double t,
                               const RadialGrid& grid,
                               PhaseGenerator gen = PhaseGenerator::projection);

/// |<a|b>|^2 by trapezoid quadrature on the shared grid.
double grid_overlap(const EvolvedState& a, const EvolvedState& b);

struct RotationScan {
  int j = 0;
  double t = 0.0;
  std::vector<double> phi_grid;
  std::vector<double> overlaps;
  double phi_star = 0.0;      ///< refined maximizer, wrapped to [0, 2 pi)
  double overlap_star = 0.0;
  bool degenerate = false;    ///< overlap_star < 0.5
};

/// Overlap |<chi(phi, t)|Phi_j(t)>|^2 in coefficient space.  The cross-Gram
/// matrix <psi_{n,0}|psi_{m,j}> is built once by quadrature; each angle then
/// costs O(levels).
class RotationEstimator {
 public:
  RotationEstimator(const CoherentState& cs0, const CoherentState& cs_j, const RadialGrid& grid);

  double overlap(double phi, double t, PhaseGenerator gen = PhaseGenerator::projection) const;

  /// Coarse scan of [0, 2 pi) followed by refinement inside the neighbouring
  /// coarse cells of the best sample.
  RotationScan scan(double t, std::size_t coarse_steps,
                    PhaseGenerator gen = PhaseGenerator::projection) const;

  const std::vector<std::vector<double>>& cross_gram() const { return gram_; }

 private:
  // q_n = conj(d_n^0 e^{-i E_n0 t}) (G b)_n, so that O(phi) = sum_n q_n e^{-i m_n phi}.
  std::vector<Complex> projected(double t) const;

  CoherentState cs0_;
  CoherentState csj_;
  std::vector<std::vector<double>> gram_;  // [active index in cs0][active index in cs_j]
};

RotationScan estimate_angle(const CoherentState& cs_j, const CoherentState& cs0, double t,
                            const RadialGrid& grid, std::size_t coarse_steps = 720,
                            PhaseGenerator gen = PhaseGenerator::projection);

struct AngleRow {
  int j = 0;
  double phi = 0.0;            ///< wrapped to [0, 2 pi)
  double phi_unwrapped = 0.0;  ///< continuous along the sweep
  double overlap = 0.0;
  bool degenerate = false;
};

/// Default quadrature grid for cross-Gram matrices.
inline RadialGrid default_overlap_grid() { return {3.8, 8.5, 4096}; }

/// Rotation angle of channel j against the j = 0 reference state cs0 at time t.
AngleRow angle_for(const MoleculeParams& params, int j, const CoherentState& cs0, double t,
                   double alpha, std::optional<int> n_prime, const RadialGrid& grid,
                   std::size_t coarse_steps);

/// angle_for over an ascending j list, with the angle unwrapped along the list.
std::vector<AngleRow> angle_sweep(const MoleculeParams& params, std::span<const int> j_list,
                                  double t, double alpha, std::optional<int> n_prime,
                                  const RadialGrid& grid, std::size_t coarse_steps = 720);

}  // namespace rotmorse
