#include "rotmorse/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rotmorse/numerics.hpp"
#include "rotmorse/units.hpp"

namespace rotmorse {

CoherentState build_cs(const RotationalChannel& channel, double alpha, std::optional<int> n_prime) {
  if (alpha == 0.0 || !std::isfinite(alpha)) {
    throw std::invalid_argument("build_cs: alpha must be finite and nonzero");
  }
  const int top = n_prime.value_or(channel.n_max);
  if (top < 0 || top > channel.n_max) {
    throw std::invalid_argument("build_cs: n_prime=" + std::to_string(top) +
                                " is outside the bound ladder 0.." + std::to_string(channel.n_max));
  }

  CoherentState cs;
  cs.channel = channel;
  cs.alpha = alpha;
  cs.n_prime = top;

  const double two_lb = 2.0 * channel.lambda_bar;
  const double log_alpha = std::log(std::abs(alpha));
  std::vector<double> log_mag(top + 1);
  for (int n = 0; n <= top; ++n) {
    const int k = top - n;
    log_mag[n] = k * log_alpha - std::lgamma(k + 1.0) +
                 0.5 * (std::lgamma(top + 1.0) + std::lgamma(two_lb - n) - std::lgamma(n + 1.0) -
                        std::lgamma(two_lb - top));
  }
  const double log_peak = *std::max_element(log_mag.begin(), log_mag.end());

  cs.coeffs.resize(top + 1);
  double sum_sq = 0.0;
  for (int n = 0; n <= top; ++n) {
    const int k = top - n;
    // (-alpha)^k: negative for odd k when alpha > 0.
    const bool negative = alpha > 0.0 && (k % 2 == 1);
    const double mag = std::exp(log_mag[n] - log_peak);
    cs.coeffs[n] = negative ? -mag : mag;
    sum_sq += mag * mag;
  }
  const double scale = 1.0 / std::sqrt(sum_sq);
  double max_abs = 0.0;
  for (int n = 0; n <= top; ++n) {
    cs.coeffs[n] *= scale;
    if (std::abs(cs.coeffs[n]) > max_abs) {
      max_abs = std::abs(cs.coeffs[n]);
      cs.peak_index = n;
    }
  }
  for (int n = 0; n <= top; ++n) {
    cs.levels.push_back(level(channel, n));
    if (std::abs(cs.coeffs[n]) >= kNegligibleCoefficient * max_abs) cs.active.push_back(n);
  }
  return cs;
}

PacketEvaluator::PacketEvaluator(const CoherentState& cs, const RadialGrid& grid)
    : cs_(cs), grid_(grid) {
  grid_.validate();
  basis_.reserve(cs_.active.size());
  for (const int n : cs_.active) {
    std::vector<double> values(grid_.count);
    for (std::size_t i = 0; i < grid_.count; ++i) {
      values[i] = wavefunction(cs_.channel, cs_.levels[n], grid_.at(i));
    }
    basis_.push_back(std::move(values));
  }
}

EvolvedState PacketEvaluator::at(double t) const {
  std::vector<Complex> factors(cs_.coeffs.size(), Complex{0.0, 0.0});
  for (const int n : cs_.active) factors[n] = std::polar(1.0, -cs_.levels[n].energy * t);
  return assemble(factors, t);
}

EvolvedState PacketEvaluator::assemble(std::span<const Complex> factors, double t) const {
  EvolvedState out;
  out.grid = grid_;
  out.t = t;
  out.amplitudes.assign(grid_.count, Complex{0.0, 0.0});
  for (std::size_t a = 0; a < cs_.active.size(); ++a) {
    const int n = cs_.active[a];
    const Complex c = cs_.coeffs[n] * factors[n];
    const auto& psi = basis_[a];
    for (std::size_t i = 0; i < grid_.count; ++i) out.amplitudes[i] += c * psi[i];
  }
  const auto rho = density(out);
  out.norm_defect = std::abs(1.0 - numerics::trapezoid(rho, grid_.spacing()));
  return out;
}

EvolvedState evolve(const CoherentState& cs, double t, const RadialGrid& grid) {
  return PacketEvaluator(cs, grid).at(t);
}

std::vector<double> density(const EvolvedState& state) {
  std::vector<double> rho(state.amplitudes.size());
  std::transform(state.amplitudes.begin(), state.amplitudes.end(), rho.begin(),
                 [](const Complex& z) { return std::norm(z); });
  return rho;
}

double classical_period(const RotationalChannel& channel, double n) {
  const double lam = channel.lambda;
  const double slope = 2.0 * channel.c1 / lam - 2.0 * channel.c2 / (lam * lam) * (n + 0.5);
  return units::kTwoPi / std::abs(slope);
}

double revival_time(const RotationalChannel& channel) {
  return units::kTwoPi * channel.lambda * channel.lambda / channel.c2;
}

Periods periods(const CoherentState& cs) {
  return {classical_period(cs.channel, 0.0), classical_period(cs.channel, cs.peak_index),
          revival_time(cs.channel)};
}

std::vector<RevivalEntry> revival_catalog(const CoherentState& cs, int s_max) {
  if (s_max < 2) throw std::invalid_argument("revival_catalog: s_max must be at least 2");
  const double t_rev = revival_time(cs.channel);
  std::vector<RevivalEntry> out;
  for (int s = 2; s <= s_max; ++s) {
    for (int r = 1; r < s; ++r) {
      if (std::gcd(r, s) != 1) continue;
      out.push_back({r, s, t_rev * r / s, s % 2 == 0 ? s / 2 : s});
    }
  }
  return out;
}

std::vector<Complex> autocorrelation(const CoherentState& cs, std::span<const double> times) {
  std::vector<Complex> out;
  out.reserve(times.size());
  for (const double t : times) {
    Complex sum{0.0, 0.0};
    for (const int n : cs.active) sum += cs.weight(n) * std::polar(1.0, -cs.levels[n].energy * t);
    out.push_back(sum);
  }
  return out;
}

double position_spread(const RadialGrid& grid, std::span<const double> rho) {
  std::vector<double> w0(rho.size());
  std::vector<double> w1(rho.size());
  std::vector<double> w2(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double r = grid.at(i);
    w0[i] = rho[i];
    w1[i] = r * rho[i];
    w2[i] = r * r * rho[i];
  }
  const double h = grid.spacing();
  const double m0 = numerics::trapezoid(w0, h);
  const double mean = numerics::trapezoid(w1, h) / m0;
  return std::sqrt(std::max(0.0, numerics::trapezoid(w2, h) / m0 - mean * mean));
}

DensityPeaks density_peaks(const RadialGrid& grid, std::span<const double> rho) {
  DensityPeaks out;
  for (const std::size_t i : numerics::find_peaks(rho)) out.positions.push_back(grid.at(i));
  out.mean_spacing = numerics::mean_spacing(out.positions);
  return out;
}

}  // namespace rotmorse
