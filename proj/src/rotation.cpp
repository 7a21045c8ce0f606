#include "rotmorse/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rotmorse/numerics.hpp"
#include "rotmorse/units.hpp"

namespace rotmorse {

namespace {

double wrap_angle(double phi) {
  phi = std::fmod(phi, units::kTwoPi);
  if (phi < 0.0) phi += units::kTwoPi;
  // Anything this close to 2 pi is zero at the refinement resolution.
  if (units::kTwoPi - phi < 1e-9) phi = 0.0;
  return phi;
}

}  // namespace

double generator_eigenvalue(const RotationalChannel& reference, int n, PhaseGenerator gen) {
  return gen == PhaseGenerator::projection ? n - reference.lambda_bar + 0.5
                                           : static_cast<double>(n);
}

EvolvedState rotated_reference(const CoherentState& cs0, double phi, double t,
                               const RadialGrid& grid, PhaseGenerator gen) {
  std::vector<Complex> factors(cs0.coeffs.size(), Complex{0.0, 0.0});
  for (const int n : cs0.active) {
    const double m = generator_eigenvalue(cs0.channel, n, gen);
    factors[n] = std::polar(1.0, m * phi - cs0.levels[n].energy * t);
  }
  return PacketEvaluator(cs0, grid).assemble(factors, t);
}

double grid_overlap(const EvolvedState& a, const EvolvedState& b) {
  if (a.amplitudes.size() != b.amplitudes.size()) {
    throw std::invalid_argument("grid_overlap: states live on different grids");
  }
  const std::size_t n = a.amplitudes.size();
  Complex sum{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    sum += w * std::conj(a.amplitudes[i]) * b.amplitudes[i];
  }
  return std::norm(sum * a.grid.spacing());
}

RotationEstimator::RotationEstimator(const CoherentState& cs0, const CoherentState& cs_j,
                                     const RadialGrid& grid)
    : cs0_(cs0), csj_(cs_j) {
  grid.validate();
  const auto sample = [&](const CoherentState& cs) {
    std::vector<std::vector<double>> rows;
    for (const int n : cs.active) {
      std::vector<double> v(grid.count);
      for (std::size_t i = 0; i < grid.count; ++i) {
        v[i] = wavefunction(cs.channel, cs.levels[n], grid.at(i));
      }
      rows.push_back(std::move(v));
    }
    return rows;
  };
  const auto left = sample(cs0_);
  const auto right = sample(csj_);
  gram_.assign(left.size(), std::vector<double>(right.size(), 0.0));
  std::vector<double> prod(grid.count);
  for (std::size_t a = 0; a < left.size(); ++a) {
    for (std::size_t b = 0; b < right.size(); ++b) {
      for (std::size_t i = 0; i < grid.count; ++i) prod[i] = left[a][i] * right[b][i];
      gram_[a][b] = numerics::trapezoid(prod, grid.spacing());
    }
  }
}

std::vector<Complex> RotationEstimator::projected(double t) const {
  std::vector<Complex> ket(csj_.active.size());
  for (std::size_t b = 0; b < ket.size(); ++b) {
    const int m = csj_.active[b];
    ket[b] = csj_.coeffs[m] * std::polar(1.0, -csj_.levels[m].energy * t);
  }
  std::vector<Complex> q(cs0_.active.size());
  for (std::size_t a = 0; a < q.size(); ++a) {
    const int n = cs0_.active[a];
    Complex g{0.0, 0.0};
    for (std::size_t b = 0; b < ket.size(); ++b) g += gram_[a][b] * ket[b];
    const Complex bra = cs0_.coeffs[n] * std::polar(1.0, -cs0_.levels[n].energy * t);
    q[a] = std::conj(bra) * g;
  }
  return q;
}

double RotationEstimator::overlap(double phi, double t, PhaseGenerator gen) const {
  const auto q = projected(t);
  Complex sum{0.0, 0.0};
  for (std::size_t a = 0; a < q.size(); ++a) {
    const double m = generator_eigenvalue(cs0_.channel, cs0_.active[a], gen);
    sum += q[a] * std::polar(1.0, -m * phi);
  }
  return std::norm(sum);
}

RotationScan RotationEstimator::scan(double t, std::size_t coarse_steps, PhaseGenerator gen) const {
  if (coarse_steps < 3) throw std::invalid_argument("RotationEstimator::scan: need >= 3 steps");
  const auto q = projected(t);
  std::vector<double> m(q.size());
  for (std::size_t a = 0; a < q.size(); ++a) {
    m[a] = generator_eigenvalue(cs0_.channel, cs0_.active[a], gen);
  }
  const auto value = [&](double phi) {
    Complex sum{0.0, 0.0};
    for (std::size_t a = 0; a < q.size(); ++a) sum += q[a] * std::polar(1.0, -m[a] * phi);
    return std::norm(sum);
  };
  // d/dphi |O|^2 = 2 Re(conj(O) O').
  const auto slope = [&](double phi) {
    Complex o{0.0, 0.0};
    Complex d{0.0, 0.0};
    for (std::size_t a = 0; a < q.size(); ++a) {
      const Complex term = q[a] * std::polar(1.0, -m[a] * phi);
      o += term;
      d += Complex{0.0, -m[a]} * term;
    }
    return 2.0 * (std::conj(o) * d).real();
  };

  RotationScan out;
  out.j = csj_.channel.j;
  out.t = t;
  const double step = units::kTwoPi / static_cast<double>(coarse_steps);
  std::size_t best = 0;
  for (std::size_t k = 0; k < coarse_steps; ++k) {
    const double phi = step * static_cast<double>(k);
    out.phi_grid.push_back(phi);
    out.overlaps.push_back(value(phi));
    if (out.overlaps[k] > out.overlaps[best]) best = k;
  }

  const double lo = out.phi_grid[best] - step;
  const double hi = out.phi_grid[best] + step;
  double phi_star = out.phi_grid[best];
  if (slope(lo) > 0.0 && slope(hi) < 0.0) {
    phi_star = numerics::find_root_bracketed(slope, lo, hi, 0.0, 1e-13).x;
  } else {
    phi_star = numerics::golden_section_max(value, lo, hi, 1e-10);
  }
  if (value(phi_star) < out.overlaps[best]) phi_star = out.phi_grid[best];

  out.phi_star = wrap_angle(phi_star);
  out.overlap_star = std::min(1.0, value(out.phi_star));
  out.degenerate = out.overlap_star < 0.5;
  return out;
}

RotationScan estimate_angle(const CoherentState& cs_j, const CoherentState& cs0, double t,
                            const RadialGrid& grid, std::size_t coarse_steps, PhaseGenerator gen) {
  if (cs0.channel.j != 0) throw std::invalid_argument("estimate_angle: reference must be j = 0");
  return RotationEstimator(cs0, cs_j, grid).scan(t, coarse_steps, gen);
}

AngleRow angle_for(const MoleculeParams& params, int j, const CoherentState& cs0, double t,
                   double alpha, std::optional<int> n_prime, const RadialGrid& grid,
                   std::size_t coarse_steps) {
  const auto cs_j = build_cs(approx_channel(params, j), alpha, n_prime);
  const auto scan = estimate_angle(cs_j, cs0, t, grid, coarse_steps);
  return {j, scan.phi_star, scan.phi_star, scan.overlap_star, scan.degenerate};
}

std::vector<AngleRow> angle_sweep(const MoleculeParams& params, std::span<const int> j_list,
                                  double t, double alpha, std::optional<int> n_prime,
                                  const RadialGrid& grid, std::size_t coarse_steps) {
  if (!std::is_sorted(j_list.begin(), j_list.end())) {
    throw std::invalid_argument("angle_sweep: j list must be ascending");
  }
  const auto cs0 = build_cs(approx_channel(params, 0), alpha, n_prime);
  std::vector<AngleRow> rows;
  std::vector<double> wrapped;
  for (const int j : j_list) {
    rows.push_back(angle_for(params, j, cs0, t, alpha, n_prime, grid, coarse_steps));
    wrapped.push_back(rows.back().phi);
  }
  const auto unwrapped = numerics::unwrap(wrapped);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].phi_unwrapped = unwrapped[i];
  return rows;
}

}  // namespace rotmorse
