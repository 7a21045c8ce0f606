#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rotmorse {

/// Morse parameters of a diatomic molecule, atomic units.
struct MoleculeParams {
  double beta = 0.9849;  ///< range parameter, 1/bohr
  double mu = 11.56e4;   ///< reduced mass, m_e
  double r0 = 5.03;      ///< equilibrium separation, bohr
  double d = 0.057;      ///< dissociation energy, hartree

  /// I2 defaults.
  static MoleculeParams iodine() { return {}; }

  /// Pure-Morse depth parameter sqrt(2 mu D) / beta.
  double lambda0() const;

  /// Throws std::invalid_argument unless all parameters are positive and the
  /// pure Morse well holds at least one bound state.
  void validate() const;
};

/// All j-dependent constants of the quadratic-in-y rotating Morse model.
///
/// The centrifugal term is expanded to second order in exp(-beta (r - r_j))
/// about the shifted minimum r_j, so that
///   V(y) = c2/(4 lambda^2) y^2 - (c1/lambda) y + c0,
///   y(r) = 2 lambda u exp(-beta (r - r_j)).
struct RotationalChannel {
  int j = 0;
  double beta = 0.0;
  double mu = 0.0;
  double r0 = 0.0;
  double d = 0.0;
  double rj = 0.0;      ///< shifted equilibrium separation
  double dj = 0.0;      ///< shifted dissociation energy
  double a = 0.0;       ///< j(j+1)/(2 mu r0^2)
  double aj = 0.0;      ///< j(j+1)/(2 mu rj^2)
  double bj = 0.0;      ///< 1/(beta rj)
  double u = 0.0;       ///< exp(-beta (rj - r0))
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double lambda = 0.0;      ///< sqrt(2 mu c2) / beta
  double lambda_bar = 0.0;  ///< (c1/c2) lambda
  int n_max = 0;            ///< largest bound vibrational index

  int bound_count() const { return n_max + 1; }

  /// Dimensionless Morse variable at separation r.
  double y_of_r(double r) const;

  /// Quadratic-in-y model potential at separation r.
  double expanded_potential(double r) const;
};

/// Exact rotating Morse potential: Morse well plus centrifugal term.
double effective_potential(const MoleculeParams& params, int j, double r);

/// Radial derivative of effective_potential.
double effective_potential_slope(const MoleculeParams& params, int j, double r);

/// Builds the channel from the closed-form shifted minimum and depth.
/// Throws SolverError when the channel holds no bound state.
RotationalChannel approx_channel(const MoleculeParams& params, int j);

/// Minimum of the effective potential from dV/dr = 0, nearest r0 on the
/// attractive branch.  Throws SolverError if no sign change is found in
/// [r0, 3 r0].
double solve_rj(const MoleculeParams& params, int j);

struct ChannelRow {
  int j = 0;
  double rj_approx = 0.0;
  std::optional<double> rj_solved;  ///< empty when the root solve failed
  double dj = 0.0;
  std::optional<RotationalChannel> channel;  ///< empty when no bound state
  std::string error;
};

/// One row per requested j, in input order.
std::vector<ChannelRow> channel_sweep(const MoleculeParams& params, std::span<const int> j_list);

}  // namespace rotmorse
