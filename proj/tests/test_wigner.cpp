#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

#include "rotmorse/errors.hpp"
#include "rotmorse/units.hpp"
#include "rotmorse/wigner.hpp"

using namespace rotmorse;

namespace {

const MoleculeParams kI2 = MoleculeParams::iodine();
const PhaseSpaceSpec kSpec{};

struct Run {
  CoherentState cs;
  RadialGrid grid;
  EvolvedState state;
  PhaseSpaceGrid w;
};

Run run(int j, double fraction, const PhaseSpaceSpec& spec = kSpec) {
  Run out{build_cs(approx_channel(kI2, j), 2.15), {}, {}, {}};
  out.grid = state_grid_for(spec, out.cs);
  out.state = evolve(out.cs, fraction * revival_time(out.cs.channel), out.grid);
  out.w = wigner_transform(out.state, spec);
  return out;
}

EvolvedState gaussian(const RadialGrid& grid, double rc, double sigma, double p0) {
  EvolvedState st;
  st.grid = grid;
  const double norm = std::pow(2 * units::kPi * sigma * sigma, -0.25);
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double x = grid.at(i) - rc;
    st.amplitudes.push_back(norm * std::exp(-x * x / (4 * sigma * sigma)) *
                            std::polar(1.0, p0 * grid.at(i)));
  }
  return st;
}

double max_w(const PhaseSpaceGrid& g) { return *std::max_element(g.values.begin(), g.values.end()); }
double min_w(const PhaseSpaceGrid& g) { return *std::min_element(g.values.begin(), g.values.end()); }

std::vector<Lobe> lobes_of(const Run& r) {
  const double sr = position_spread(r.grid, density(evolve(r.cs, 0.0, r.grid)));
  return find_lobes(r.w, sr, 0.5 / sr);
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK_NOTHROW(kSpec.validate());
  PhaseSpaceSpec s = kSpec;
  s.n_r = 1;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = kSpec;
  s.p_min = 10;
  s.p_max = -10;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("state grid contains every phase-space row") {
  const auto g = state_grid_for(kSpec, 3.9, 7.4);
  CHECK(g.r_min <= 3.9);
  CHECK(g.r_max >= 7.4);
  const double ratio = kSpec.dr() / g.spacing();
  CHECK(std::abs(ratio - std::round(ratio)) < 1e-9);
  const double offset = (kSpec.r_min - g.r_min) / g.spacing();
  CHECK(std::abs(offset - std::round(offset)) < 1e-6);
  CHECK(g.spacing() <= units::kPi / (4 * 60.0) + 1e-15);
}

TEST_CASE("Gaussian packet against its closed-form Wigner function") {
  const double rc = 5.5;
  const double sigma = 0.1;
  const double p0 = 20.0;
  const auto st = gaussian(state_grid_for(kSpec, 4.2, 7.0), rc, sigma, p0);
  const auto w = wigner_transform(st, kSpec);
  double err = 0.0;
  for (std::size_t i = 0; i < kSpec.n_r; ++i) {
    for (std::size_t k = 0; k < kSpec.n_p; ++k) {
      const double x = kSpec.r_at(i) - rc;
      const double q = kSpec.p_at(k) - p0;
      const double ref = std::exp(-x * x / (2 * sigma * sigma) - 2 * sigma * sigma * q * q) / units::kPi;
      err = std::max(err, std::abs(w.at(i, k) - ref));
    }
  }
  CHECK(err < 1e-10);
  CHECK(w.normalization_defect() < 1e-6);
}

TEST_CASE("transform agrees with direct quadrature") {
  const auto r = run(0, 0.25);
  for (const std::size_t i : {40u, 100u, 180u}) {
    for (const std::size_t k : {10u, 128u, 200u}) {
      CHECK(std::abs(wigner_direct(r.state, kSpec.r_at(i), kSpec.p_at(k)) - r.w.at(i, k)) < 1e-12);
    }
  }
}

TEST_CASE("coverage errors") {
  const RadialGrid tight = state_grid_for(kSpec, 4.2, 7.0);
  // A packet sitting on the grid edge is truncated.
  CHECK_THROWS_AS(wigner_transform(gaussian(tight, 4.25, 0.1, 0.0), kSpec), CoverageError);

  // Rows outside the state grid.
  PhaseSpaceSpec wide = kSpec;
  wide.r_min = 3.0;
  CHECK_THROWS_AS(wigner_transform(gaussian(tight, 5.5, 0.1, 0.0), wide), CoverageError);

  // Rows between state-grid points.
  RadialGrid shifted = tight;
  shifted.r_min += 0.3 * tight.spacing();
  shifted.r_max += 0.3 * tight.spacing();
  PhaseSpaceSpec inner = kSpec;
  inner.r_min = 4.5;
  inner.r_max = 6.5;
  inner.n_r = 100;
  CHECK_THROWS_AS(wigner_transform(gaussian(shifted, 5.5, 0.1, 0.0), inner), CoverageError);
}

TEST_CASE("initial coherent state") {
  const auto r = run(0, 0.0);
  CHECK(min_w(r.w) > -0.01 * max_w(r.w));
  CHECK(r.w.normalization_defect() < 1e-3);
  const auto m = interference_metrics(r.w, SliceAxis::position, 0.0);
  CHECK(m.negativity_volume < 0.01);
  CHECK(lobes_of(r).size() == 1);
}

TEST_CASE("marginals reproduce the densities") {
  for (const double f : {0.0, 0.25}) {
    const auto r = run(0, f);
    const auto rho = density(r.state);
    const auto pos = marginal_position(r.w);
    double err_r = 0.0;
    for (std::size_t i = 0; i < kSpec.n_r; ++i) {
      const auto idx =
          static_cast<std::size_t>(std::lround((kSpec.r_at(i) - r.grid.r_min) / r.grid.spacing()));
      err_r = std::max(err_r, std::abs(pos[i] - rho[idx]));
    }
    CHECK(err_r < 1e-3);

    std::vector<double> p;
    for (std::size_t k = 0; k < kSpec.n_p; ++k) p.push_back(kSpec.p_at(k));
    const auto mom_ref = momentum_density(r.state, p);
    const auto mom = marginal_momentum(r.w);
    double err_p = 0.0;
    for (std::size_t k = 0; k < kSpec.n_p; ++k) err_p = std::max(err_p, std::abs(mom[k] - mom_ref[k]));
    CHECK(err_p < 1e-3);
  }
}

TEST_CASE("realness and the 1/pi bound") {
  for (const double f : {0.0, 0.125, 0.25}) {
    const auto r = run(0, f);
    double peak = 0.0;
    for (const double v : r.w.values) peak = std::max(peak, std::abs(v));
    CHECK(r.w.max_imag_residue < 1e-10 * peak);
    CHECK(peak <= 1.01 / units::kPi);
  }
}

TEST_CASE("cat state at a quarter revival") {
  const auto r = run(0, 0.25);
  CHECK(min_w(r.w) < -0.01 * max_w(r.w));
  const auto lobes = lobes_of(r);
  REQUIRE(lobes.size() == 2);
  // Midway between the two components W alternates in sign.
  const double r_mid = 0.5 * (lobes[0].r + lobes[1].r);
  const auto i = static_cast<std::size_t>(std::lround((r_mid - kSpec.r_min) / kSpec.dr()));
  int flips = 0;
  double last = 0.0;
  for (std::size_t k = 0; k < kSpec.n_p; ++k) {
    const double v = r.w.at(i, k);
    if (std::abs(v) < 0.05 * max_w(r.w)) continue;
    if (last != 0.0 && (v > 0) != (last > 0)) ++flips;
    last = v;
  }
  CHECK(flips >= 4);
}

TEST_CASE("compass state at an eighth revival") {
  const auto r = run(0, 0.125);
  const auto lobes = lobes_of(r);
  REQUIRE(lobes.size() == 4);
  double r_lo = 1e9, r_hi = -1e9, p_lo = 1e9, p_hi = -1e9;
  for (const auto& l : lobes) {
    r_lo = std::min(r_lo, l.r);
    r_hi = std::max(r_hi, l.r);
    p_lo = std::min(p_lo, l.p);
    p_hi = std::max(p_hi, l.p);
  }
  // The interior of the compass carries both signs.
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < kSpec.n_r; ++i) {
    for (std::size_t k = 0; k < kSpec.n_p; ++k) {
      const double rr = kSpec.r_at(i);
      const double pp = kSpec.p_at(k);
      const double rc = 0.5 * (r_lo + r_hi);
      const double pc = 0.5 * (p_lo + p_hi);
      if (std::abs(rr - rc) > 0.25 * (r_hi - r_lo) || std::abs(pp - pc) > 0.25 * (p_hi - p_lo)) continue;
      lo = std::min(lo, r.w.at(i, k));
      hi = std::max(hi, r.w.at(i, k));
    }
  }
  CHECK(lo < -0.1 * max_w(r.w));
  CHECK(hi > 0.1 * max_w(r.w));
}

TEST_CASE("mirror revival at half the revival time") {
  CHECK(lobes_of(run(0, 0.5)).size() == 1);
}

TEST_CASE("j = 81 cat is split in momentum, not in position") {
  const auto r = run(81, 0.25);
  const auto lobes = lobes_of(r);
  REQUIRE(lobes.size() == 2);
  CHECK(std::abs(lobes[0].r - lobes[1].r) < 0.1);
  CHECK(std::abs(lobes[0].p - lobes[1].p) > 40.0);
  const auto m = interference_metrics(r.w, SliceAxis::position, 0.0);
  REQUIRE(m.fringe_spacing.has_value());
  CHECK(*m.fringe_spacing == doctest::Approx(0.07).epsilon(0.02 / 0.07));
}

TEST_CASE("initial Wigner function barely depends on j") {
  // Same ladder top for both channels, so only the basis differs.
  const int top = approx_channel(kI2, 60).n_max;
  const auto wigner_at_zero = [&](int j) {
    const auto cs = build_cs(approx_channel(kI2, j), 2.15, top);
    return wigner_transform(evolve(cs, 0.0, state_grid_for(kSpec, cs)), kSpec);
  };
  const auto a = wigner_at_zero(0);
  const auto b = wigner_at_zero(60);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    diff = std::max(diff, std::abs(a.values[i] - b.values[i]));
  }
  CHECK(diff < 0.05 * max_w(a));
}

TEST_CASE("interference metrics reject slices off the grid") {
  const auto r = run(0, 0.0);
  CHECK_THROWS_AS(interference_metrics(r.w, SliceAxis::position, 100.0), std::out_of_range);
  CHECK_THROWS_AS(interference_metrics(r.w, SliceAxis::momentum, 2.0), std::out_of_range);
  const auto m = interference_metrics(r.w, SliceAxis::momentum, 4.7);
  CHECK(m.max_w == doctest::Approx(max_w(r.w)));
}

TEST_CASE("256 x 256 transform is fast") {
  const auto cs = build_cs(approx_channel(kI2, 0), 2.15);
  const auto grid = state_grid_for(kSpec, cs);
  const auto st = evolve(cs, 0.25 * revival_time(cs.channel), grid);
  const auto t0 = std::chrono::steady_clock::now();
  const auto w = wigner_transform(st, kSpec);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(w.values.size() == 256u * 256u);
  CHECK(secs < 60.0);
}
