#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rotmorse/eigensystem.hpp"
#include "rotmorse/wavepacket.hpp"

namespace rotmorse {

/// Rectangular (r, p) lattice, end points included on both axes.
struct PhaseSpaceSpec {
  double r_min = 4.2;
  double r_max = 7.0;
  std::size_t n_r = 256;
  double p_min = -60.0;
  double p_max = 60.0;
  std::size_t n_p = 256;

  double dr() const { return (r_max - r_min) / static_cast<double>(n_r - 1); }
  double dp() const { return (p_max - p_min) / static_cast<double>(n_p - 1); }
  double r_at(std::size_t i) const { return r_min + static_cast<double>(i) * dr(); }
  double p_at(std::size_t k) const { return p_min + static_cast<double>(k) * dp(); }

  /// Throws std::invalid_argument for empty or inverted axes.
  void validate() const;
};

/// Wigner values W[r_index][p_index], row-major in r.
struct PhaseSpaceGrid {
  PhaseSpaceSpec spec;
  std::vector<double> values;
  double max_imag_residue = 0.0;  ///< largest |Im W| discarded by the transform
  double integral = 0.0;          ///< trapezoid integral of W over the lattice

  double at(std::size_t i, std::size_t k) const { return values[i * spec.n_p + k]; }
  double normalization_defect() const { return std::abs(1.0 - integral); }
};

/// Relative amplitude below which a state is treated as zero.
inline constexpr double kSupportThreshold = 1e-12;

/// Radial grid whose points include every r row of `spec` and which extends
/// over [support_lo, support_hi].  The spacing divides dr() and is fine
/// enough to resolve momenta up to twice max(|p_min|, |p_max|).
RadialGrid state_grid_for(const PhaseSpaceSpec& spec, double support_lo, double support_hi);

/// Default state grid for a coherent state: covers the phase-space rows and
/// the support of every level carrying non-negligible weight.
RadialGrid state_grid_for(const PhaseSpaceSpec& spec, const CoherentState& cs);

/// W(r, p) = 1/pi integral Phi*(r - r') Phi(r + r') exp(-2 i p r') dr'.
///
/// Each row uses the correlation product on the state grid, restricted to the
/// state's support, and a chirp-z transform evaluates all requested p at once.
/// Throws CoverageError when the state grid truncates the state, does not
/// contain the requested rows, or is not aligned with them.
PhaseSpaceGrid wigner_transform(const EvolvedState& state, const PhaseSpaceSpec& spec);

/// Same discrete sum as wigner_transform for one point, evaluated directly.
/// `r` must be a state-grid point.
double wigner_direct(const EvolvedState& state, double r, double p);

/// integral W dp for every r row.
std::vector<double> marginal_position(const PhaseSpaceGrid& grid);

/// integral W dr for every p column.
std::vector<double> marginal_momentum(const PhaseSpaceGrid& grid);

/// |Phi~(p)|^2 with Phi~(p) = (2 pi)^{-1/2} integral Phi(r) exp(-i p r) dr.
std::vector<double> momentum_density(const EvolvedState& state, std::span<const double> p);

enum class SliceAxis {
  position,  ///< slice along r at fixed p
  momentum,  ///< slice along p at fixed r
};

struct InterferenceMetrics {
  double negativity_volume = 0.0;  ///< integral of max(-W, 0)
  double min_w = 0.0;
  double max_w = 0.0;
  std::size_t fringe_count = 0;
  std::optional<double> fringe_spacing;  ///< mean distance between slice maxima
};

/// Throws std::out_of_range if the fixed coordinate lies outside the grid.
InterferenceMetrics interference_metrics(const PhaseSpaceGrid& grid, SliceAxis axis,
                                         double fixed_coordinate);

struct Lobe {
  double r = 0.0;
  double p = 0.0;
  double height = 0.0;  ///< relative to the tallest smoothed maximum
};

/// Maxima of W after Gaussian coarse-graining with widths (sigma_r, sigma_p).
/// With sigma_r * sigma_p = 1/2 the smoothing removes interference fringes
/// and leaves one maximum per coherent component.  Maxima closer than one
/// smoothing width are merged.
std::vector<Lobe> find_lobes(const PhaseSpaceGrid& grid, double sigma_r, double sigma_p,
                             double rel_threshold = 0.1);

}  // namespace rotmorse
