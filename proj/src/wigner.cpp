#include "rotmorse/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fft_plan.hpp"
#include "rotmorse/errors.hpp"
#include "rotmorse/numerics.hpp"
#include "rotmorse/units.hpp"

namespace rotmorse {

namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

struct Support {
  std::size_t lo = 0;
  std::size_t hi = 0;
  double peak = 0.0;
};

Support amplitude_support(std::span<const Complex> phi) {
  Support s;
  for (const auto& z : phi) s.peak = std::max(s.peak, std::abs(z));
  const double floor = kSupportThreshold * s.peak;
  s.lo = phi.size();
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (std::abs(phi[i]) > floor) {
      s.lo = std::min(s.lo, i);
      s.hi = i;
    }
  }
  return s;
}

// Nearest state-grid index of r; throws when r is not on the grid.
std::size_t grid_index(const RadialGrid& grid, double r) {
  const double pos = (r - grid.r_min) / grid.spacing();
  const double idx = std::round(pos);
  if (std::abs(pos - idx) > 1e-6 || idx < 0.0 || idx > static_cast<double>(grid.count - 1)) {
    std::ostringstream msg;
    msg << "r=" << r << " is not a point of the state grid [" << grid.r_min << ", " << grid.r_max
        << "] with spacing " << grid.spacing();
    throw CoverageError(msg.str());
  }
  return static_cast<std::size_t>(idx);
}

}  // namespace

void PhaseSpaceSpec::validate() const {
  if (n_r < 2 || n_p < 2) throw std::invalid_argument("phase-space grid needs at least 2x2 points");
  if (!(r_min > 0.0 && r_min < r_max)) {
    throw std::invalid_argument("phase-space grid requires 0 < r_min < r_max");
  }
  if (!(p_min < p_max)) throw std::invalid_argument("phase-space grid requires p_min < p_max");
}

RadialGrid state_grid_for(const PhaseSpaceSpec& spec, double support_lo, double support_hi) {
  spec.validate();
  const double p_extent = std::max(std::abs(spec.p_min), std::abs(spec.p_max));
  // Row spacing h samples momenta up to pi/(2h); keep that at least twice p_extent.
  const double h_max = units::kPi / (4.0 * p_extent);
  const auto refine = static_cast<std::size_t>(std::max(1.0, std::ceil(spec.dr() / h_max - 1e-9)));
  const double h = spec.dr() / static_cast<double>(refine);

  const double lo = std::min(spec.r_min, support_lo);
  const double hi = std::max(spec.r_max, support_hi);
  auto before = static_cast<std::size_t>(std::ceil((spec.r_min - lo) / h - 1e-9));
  // Keep r_min positive.
  while (before > 0 && spec.r_min - static_cast<double>(before) * h <= 0.0) --before;
  const auto after = static_cast<std::size_t>(std::ceil((hi - spec.r_max) / h - 1e-9));
  const std::size_t rows_span = (spec.n_r - 1) * refine;

  RadialGrid grid;
  grid.r_min = spec.r_min - static_cast<double>(before) * h;
  grid.count = before + rows_span + after + 1;
  grid.r_max = grid.r_min + static_cast<double>(grid.count - 1) * h;
  return grid;
}

RadialGrid state_grid_for(const PhaseSpaceSpec& spec, const CoherentState& cs) {
  double max_abs = 0.0;
  for (const double c : cs.coeffs) max_abs = std::max(max_abs, std::abs(c));
  int n_hi = 0;
  for (const int n : cs.active) {
    if (std::abs(cs.coeffs[n]) >= 1e-8 * max_abs) n_hi = std::max(n_hi, n);
  }
  RadialGrid base{spec.r_min, spec.r_max, 512};
  const RadialGrid covering = adequate_grid(cs.channel, n_hi, base, kSupportThreshold);
  return state_grid_for(spec, covering.r_min, covering.r_max);
}

PhaseSpaceGrid wigner_transform(const EvolvedState& state, const PhaseSpaceSpec& spec) {
  spec.validate();
  const RadialGrid& sg = state.grid;
  const std::span<const Complex> phi = state.amplitudes;
  const double h = sg.spacing();

  const Support sup = amplitude_support(phi);
  if (sup.lo > sup.hi || sup.peak == 0.0) throw CoverageError("state is identically zero");
  const double edge = kSupportThreshold * sup.peak;
  if (std::abs(phi.front()) > edge || std::abs(phi.back()) > edge) {
    std::ostringstream msg;
    msg << "state grid [" << sg.r_min << ", " << sg.r_max << "] truncates the state; widen";
    if (std::abs(phi.front()) > edge) msg << " below r=" << sg.r_min;
    if (std::abs(phi.back()) > edge) msg << " above r=" << sg.r_max;
    msg << " until the boundary amplitude falls under " << kSupportThreshold << " of the peak";
    throw CoverageError(msg.str());
  }

  const double stride_f = spec.dr() / h;
  const double stride_r = std::round(stride_f);
  if (stride_r < 1.0 || std::abs(stride_f - stride_r) > 1e-6) {
    throw CoverageError("phase-space row spacing is not a multiple of the state-grid spacing");
  }
  if (spec.r_min < sg.r_min - 1e-9 * h || spec.r_max > sg.r_max + 1e-9 * h) {
    std::ostringstream msg;
    msg << "state grid [" << sg.r_min << ", " << sg.r_max << "] must contain the rows ["
        << spec.r_min << ", " << spec.r_max << "]";
    throw CoverageError(msg.str());
  }
  const auto stride = static_cast<std::size_t>(stride_r);
  const std::size_t first = grid_index(sg, spec.r_min);

  // Half-width of the r' window per row, limited by the support on both sides.
  std::vector<long> half_width(spec.n_r);
  long k_max = 0;
  for (std::size_t i = 0; i < spec.n_r; ++i) {
    const auto c = static_cast<long>(first + i * stride);
    const long k = std::min(c - static_cast<long>(sup.lo), static_cast<long>(sup.hi) - c);
    half_width[i] = k;
    k_max = std::max(k_max, k);
  }

  // Chirp-z: X_m = sum_{k=-K}^{K} x_k exp(-i theta m k), theta = 2 dp h.
  const std::size_t len = 2 * static_cast<std::size_t>(k_max) + 1;
  const std::size_t m_count = spec.n_p;
  const std::size_t nfft = next_pow2(len + m_count - 1);
  const double theta = 2.0 * spec.dp() * h;

  detail::FftPlan fwd(nfft, detail::FftPlan::Direction::forward);
  detail::FftPlan bwd(nfft, detail::FftPlan::Direction::backward);

  // Kernel b_l = exp(i theta l^2 / 2) for l in [-(len-1), m_count-1], wrapped.
  std::vector<Complex> kernel_hat(nfft);
  {
    auto buf = fwd.data();
    std::fill(buf.begin(), buf.end(), Complex{0.0, 0.0});
    for (long l = -static_cast<long>(len - 1); l < static_cast<long>(m_count); ++l) {
      const double ll = static_cast<double>(l);
      const auto slot = static_cast<std::size_t>((l + static_cast<long>(nfft)) % static_cast<long>(nfft));
      buf[slot] = std::polar(1.0, 0.5 * theta * ll * ll);
    }
    fwd.execute();
    std::copy(buf.begin(), buf.end(), kernel_hat.begin());
  }

  std::vector<Complex> pre_chirp(len);
  for (std::size_t kp = 0; kp < len; ++kp) {
    const double k = static_cast<double>(kp) - static_cast<double>(k_max);
    const double kpd = static_cast<double>(kp);
    // exp(-2 i p_min k h) shifts the first frequency to p_min.
    pre_chirp[kp] = std::polar(1.0, -2.0 * spec.p_min * k * h - 0.5 * theta * kpd * kpd);
  }
  std::vector<Complex> post_chirp(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    const double md = static_cast<double>(m);
    post_chirp[m] = std::polar(1.0, theta * md * static_cast<double>(k_max) - 0.5 * theta * md * md) /
                    static_cast<double>(nfft);
  }

  PhaseSpaceGrid out;
  out.spec = spec;
  out.values.assign(spec.n_r * spec.n_p, 0.0);
  const double scale = h / units::kPi;
  for (std::size_t i = 0; i < spec.n_r; ++i) {
    const long kw = half_width[i];
    if (kw < 0) continue;
    const auto c = static_cast<long>(first + i * stride);

    auto a = fwd.data();
    std::fill(a.begin(), a.end(), Complex{0.0, 0.0});
    for (long k = -kw; k <= kw; ++k) {
      const auto kp = static_cast<std::size_t>(k + k_max);
      a[kp] = std::conj(phi[c - k]) * phi[c + k] * pre_chirp[kp];
    }
    fwd.execute();
    auto b = bwd.data();
    for (std::size_t q = 0; q < nfft; ++q) b[q] = a[q] * kernel_hat[q];
    bwd.execute();
    for (std::size_t m = 0; m < m_count; ++m) {
      const Complex w = scale * b[m] * post_chirp[m];
      out.values[i * spec.n_p + m] = w.real();
      out.max_imag_residue = std::max(out.max_imag_residue, std::abs(w.imag()));
    }
  }

  const auto rows = marginal_position(out);
  out.integral = numerics::trapezoid(rows, spec.dr());
  return out;
}

double wigner_direct(const EvolvedState& state, double r, double p) {
  const RadialGrid& sg = state.grid;
  const double h = sg.spacing();
  const auto c = static_cast<long>(grid_index(sg, r));
  const long kw = std::min(c, static_cast<long>(sg.count) - 1 - c);
  Complex sum{0.0, 0.0};
  for (long k = -kw; k <= kw; ++k) {
    sum += std::conj(state.amplitudes[c - k]) * state.amplitudes[c + k] *
           std::polar(1.0, -2.0 * p * static_cast<double>(k) * h);
  }
  return (h / units::kPi * sum).real();
}

std::vector<double> marginal_position(const PhaseSpaceGrid& grid) {
  const auto& s = grid.spec;
  std::vector<double> out(s.n_r);
  for (std::size_t i = 0; i < s.n_r; ++i) {
    out[i] = numerics::trapezoid(std::span<const double>(grid.values).subspan(i * s.n_p, s.n_p), s.dp());
  }
  return out;
}

std::vector<double> marginal_momentum(const PhaseSpaceGrid& grid) {
  const auto& s = grid.spec;
  std::vector<double> out(s.n_p);
  std::vector<double> column(s.n_r);
  for (std::size_t k = 0; k < s.n_p; ++k) {
    for (std::size_t i = 0; i < s.n_r; ++i) column[i] = grid.at(i, k);
    out[k] = numerics::trapezoid(column, s.dr());
  }
  return out;
}

std::vector<double> momentum_density(const EvolvedState& state, std::span<const double> p) {
  const RadialGrid& g = state.grid;
  const double h = g.spacing();
  const double norm = 1.0 / std::sqrt(units::kTwoPi);
  std::vector<double> out;
  out.reserve(p.size());
  for (const double pk : p) {
    Complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < g.count; ++i) {
      const double w = (i == 0 || i + 1 == g.count) ? 0.5 : 1.0;
      sum += w * state.amplitudes[i] * std::polar(1.0, -pk * g.at(i));
    }
    out.push_back(std::norm(norm * h * sum));
  }
  return out;
}

InterferenceMetrics interference_metrics(const PhaseSpaceGrid& grid, SliceAxis axis,
                                         double fixed_coordinate) {
  const auto& s = grid.spec;
  InterferenceMetrics m;
  m.min_w = *std::min_element(grid.values.begin(), grid.values.end());
  m.max_w = *std::max_element(grid.values.begin(), grid.values.end());

  std::vector<double> neg_rows(s.n_r);
  std::vector<double> row(s.n_p);
  for (std::size_t i = 0; i < s.n_r; ++i) {
    for (std::size_t k = 0; k < s.n_p; ++k) row[k] = std::max(-grid.at(i, k), 0.0);
    neg_rows[i] = numerics::trapezoid(row, s.dp());
  }
  m.negativity_volume = numerics::trapezoid(neg_rows, s.dr());

  std::vector<double> slice;
  std::vector<double> coords;
  if (axis == SliceAxis::position) {
    if (fixed_coordinate < s.p_min || fixed_coordinate > s.p_max) {
      throw std::out_of_range("interference_metrics: momentum slice outside the grid");
    }
    const auto k = static_cast<std::size_t>(std::lround((fixed_coordinate - s.p_min) / s.dp()));
    for (std::size_t i = 0; i < s.n_r; ++i) {
      slice.push_back(grid.at(i, k));
      coords.push_back(s.r_at(i));
    }
  } else {
    if (fixed_coordinate < s.r_min || fixed_coordinate > s.r_max) {
      throw std::out_of_range("interference_metrics: position slice outside the grid");
    }
    const auto i = static_cast<std::size_t>(std::lround((fixed_coordinate - s.r_min) / s.dr()));
    for (std::size_t k = 0; k < s.n_p; ++k) {
      slice.push_back(grid.at(i, k));
      coords.push_back(s.p_at(k));
    }
  }
  std::vector<double> maxima;
  for (const std::size_t idx : numerics::find_peaks(slice)) maxima.push_back(coords[idx]);
  m.fringe_count = maxima.size();
  m.fringe_spacing = numerics::mean_spacing(maxima);
  return m;
}

std::vector<Lobe> find_lobes(const PhaseSpaceGrid& grid, double sigma_r, double sigma_p,
                             double rel_threshold) {
  const auto& s = grid.spec;
  const auto gaussian_taps = [](double sigma_cells) {
    const int half = std::max(1, static_cast<int>(std::ceil(4.0 * sigma_cells)));
    std::vector<double> taps(2 * half + 1);
    double sum = 0.0;
    for (int t = -half; t <= half; ++t) {
      const double v = std::exp(-0.5 * t * t / (sigma_cells * sigma_cells));
      taps[t + half] = v;
      sum += v;
    }
    for (double& v : taps) v /= sum;
    return taps;
  };
  const auto taps_r = gaussian_taps(sigma_r / s.dr());
  const auto taps_p = gaussian_taps(sigma_p / s.dp());
  const long hr = static_cast<long>(taps_r.size() / 2);
  const long hp = static_cast<long>(taps_p.size() / 2);
  const long nr = static_cast<long>(s.n_r);
  const long np = static_cast<long>(s.n_p);

  // Separable smoothing; values outside the lattice count as zero.
  std::vector<double> tmp(grid.values.size(), 0.0);
  for (long i = 0; i < nr; ++i) {
    for (long k = 0; k < np; ++k) {
      double acc = 0.0;
      for (long t = -hp; t <= hp; ++t) {
        const long kk = k + t;
        if (kk >= 0 && kk < np) acc += taps_p[t + hp] * grid.values[i * np + kk];
      }
      tmp[i * np + k] = acc;
    }
  }
  std::vector<double> smooth(grid.values.size(), 0.0);
  for (long i = 0; i < nr; ++i) {
    for (long k = 0; k < np; ++k) {
      double acc = 0.0;
      for (long t = -hr; t <= hr; ++t) {
        const long ii = i + t;
        if (ii >= 0 && ii < nr) acc += taps_r[t + hr] * tmp[ii * np + k];
      }
      smooth[i * np + k] = acc;
    }
  }

  const double top = *std::max_element(smooth.begin(), smooth.end());
  std::vector<Lobe> candidates;
  if (!(top > 0.0)) return candidates;
  for (long i = 1; i + 1 < nr; ++i) {
    for (long k = 1; k + 1 < np; ++k) {
      const double v = smooth[i * np + k];
      if (v <= rel_threshold * top) continue;
      bool is_max = true;
      for (long di = -1; di <= 1 && is_max; ++di) {
        for (long dk = -1; dk <= 1; ++dk) {
          if ((di != 0 || dk != 0) && smooth[(i + di) * np + (k + dk)] > v) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) {
        candidates.push_back({s.r_at(static_cast<std::size_t>(i)),
                              s.p_at(static_cast<std::size_t>(k)), v / top});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Lobe& a, const Lobe& b) { return a.height > b.height; });
  std::vector<Lobe> lobes;
  for (const auto& cand : candidates) {
    const bool merged = std::any_of(lobes.begin(), lobes.end(), [&](const Lobe& kept) {
      const double dr = (cand.r - kept.r) / sigma_r;
      const double dp = (cand.p - kept.p) / sigma_p;
      return dr * dr + dp * dp < 1.0;
    });
    if (!merged) lobes.push_back(cand);
  }
  return lobes;
}

}  // namespace rotmorse
