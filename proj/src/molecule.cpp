#include "rotmorse/molecule.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rotmorse/errors.hpp"
#include "rotmorse/numerics.hpp"

namespace rotmorse {

namespace {

double centrifugal_strength(const MoleculeParams& p, int j, double r) {
  const double jj = static_cast<double>(j) * (j + 1);
  return jj / (2.0 * p.mu * r * r);
}

}  // namespace

double MoleculeParams::lambda0() const { return std::sqrt(2.0 * mu * d) / beta; }

void MoleculeParams::validate() const {
  if (!(beta > 0.0 && mu > 0.0 && r0 > 0.0 && d > 0.0)) {
    throw std::invalid_argument("molecule parameters beta, mu, r0, d must all be positive");
  }
  if (!(lambda0() > 1.0)) {
    throw std::invalid_argument("sqrt(2 mu D)/beta must exceed 1 for a bound state to exist");
  }
}

double RotationalChannel::y_of_r(double r) const {
  return 2.0 * lambda * u * std::exp(-beta * (r - rj));
}

double RotationalChannel::expanded_potential(double r) const {
  const double y = y_of_r(r);
  return c2 / (4.0 * lambda * lambda) * y * y - c1 / lambda * y + c0;
}

double effective_potential(const MoleculeParams& params, int j, double r) {
  if (!(r > 0.0)) throw std::domain_error("effective_potential: r must be positive");
  const double e = std::exp(-params.beta * (r - params.r0));
  return params.d * (e * e - 2.0 * e) + centrifugal_strength(params, j, r);
}

double effective_potential_slope(const MoleculeParams& params, int j, double r) {
  if (!(r > 0.0)) throw std::domain_error("effective_potential_slope: r must be positive");
  const double e = std::exp(-params.beta * (r - params.r0));
  return 2.0 * params.beta * params.d * (e - e * e) - 2.0 * centrifugal_strength(params, j, r) / r;
}

RotationalChannel approx_channel(const MoleculeParams& params, int j) {
  if (j < 0) throw std::invalid_argument("approx_channel: j must be non-negative");
  params.validate();

  RotationalChannel ch;
  ch.j = j;
  ch.beta = params.beta;
  ch.mu = params.mu;
  ch.r0 = params.r0;
  ch.d = params.d;

  const double b0sq = params.beta * params.beta * params.r0 * params.r0;
  ch.a = centrifugal_strength(params, j, params.r0);
  ch.rj = params.r0 * (1.0 + ch.a / (b0sq * params.d));
  ch.dj = params.d - ch.a * (1.0 - ch.a / (b0sq * params.d));
  ch.aj = centrifugal_strength(params, j, ch.rj);
  ch.bj = 1.0 / (params.beta * ch.rj);
  ch.u = std::exp(-params.beta * (ch.rj - params.r0));

  // Second-order expansion of rj^2/r^2 in exp(-beta (r - rj)):
  //   1 - 3b + 3b^2  +  (4b - 6b^2) z  +  (3b^2 - b) z^2.
  const double b = ch.bj;
  const double aj = ch.aj;
  const double u = ch.u;
  ch.c0 = aj * (3.0 * b * b - 3.0 * b + 1.0);
  ch.c1 = (aj * (3.0 * b * b - 2.0 * b) + u * params.d) / u;
  ch.c2 = (aj * (3.0 * b * b - b) + u * u * params.d) / (u * u);

  if (!(ch.c2 > 0.0)) {
    throw SolverError("j=" + std::to_string(j) + ": quadratic coefficient c2 is not positive");
  }
  ch.lambda = std::sqrt(2.0 * params.mu * ch.c2) / params.beta;
  ch.lambda_bar = ch.c1 / ch.c2 * ch.lambda;
  if (!(ch.lambda_bar > 0.5)) {
    throw SolverError("j=" + std::to_string(j) + ": channel holds no bound state");
  }
  ch.n_max = static_cast<int>(std::floor(ch.lambda_bar - 0.5));
  // Exactly integral lambda_bar - 1/2 gives s = 0 at the top, which is not normalizable.
  if (static_cast<double>(ch.n_max) == ch.lambda_bar - 0.5) --ch.n_max;
  return ch;
}

double solve_rj(const MoleculeParams& params, int j) {
  if (j < 0) throw std::invalid_argument("solve_rj: j must be non-negative");
  params.validate();
  if (j == 0) return params.r0;

  const auto slope = [&](double r) { return effective_potential_slope(params, j, r); };
  const double r0 = params.r0;

  // Widen the right edge 1.5 r0 -> 2 r0 -> 3 r0.  The slope is negative at r0;
  // the first sign change is the well minimum, a later one the barrier top.
  for (double width = 0.5 * r0; width <= 2.0 * r0 + 1e-12; width *= 2.0) {
    const auto bracket = numerics::first_sign_change(slope, r0, r0 + width, 256);
    if (!bracket) continue;
    if (bracket->first == bracket->second) return bracket->first;
    return numerics::find_root_bracketed(slope, bracket->first, bracket->second, 1e-12, 1e-12).x;
  }
  throw SolverError("j=" + std::to_string(j) +
                    ": no minimum of the effective potential found in [r0, 3 r0]");
}

std::vector<ChannelRow> channel_sweep(const MoleculeParams& params, std::span<const int> j_list) {
  std::vector<ChannelRow> rows;
  rows.reserve(j_list.size());
  for (const int j : j_list) {
    ChannelRow row;
    row.j = j;
    const double b0sq = params.beta * params.beta * params.r0 * params.r0;
    const double a = static_cast<double>(j) * (j + 1) / (2.0 * params.mu * params.r0 * params.r0);
    row.rj_approx = params.r0 * (1.0 + a / (b0sq * params.d));
    row.dj = params.d - a * (1.0 - a / (b0sq * params.d));
    try {
      row.channel = approx_channel(params, j);
    } catch (const SolverError& e) {
      row.error = e.what();
    }
    try {
      row.rj_solved = solve_rj(params, j);
    } catch (const SolverError& e) {
      if (!row.error.empty()) row.error += "; ";
      row.error += e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace rotmorse
