#include "rotmorse/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <set>
#include <stdexcept>

#include "rotmorse/errors.hpp"
#include "rotmorse/io.hpp"
#include "rotmorse/rotation.hpp"
#include "rotmorse/units.hpp"
#include "rotmorse/wavepacket.hpp"
#include "rotmorse/wigner.hpp"

namespace rotmorse::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt(double v) { return io::format_number(v); }

std::string stem(const char* kind, int j, std::size_t time_index) {
  return std::string(kind) + "_j" + std::to_string(j) + "_t" + std::to_string(time_index);
}

// Highest level whose coefficient matters at the 1e-8 relative level.
int significant_top(const CoherentState& cs) {
  double max_abs = 0.0;
  for (const double c : cs.coeffs) max_abs = std::max(max_abs, std::abs(c));
  int n_hi = 0;
  for (const int n : cs.active) {
    if (std::abs(cs.coeffs[n]) >= 1e-8 * max_abs) n_hi = std::max(n_hi, n);
  }
  return n_hi;
}

json periods_json(const Periods& p) {
  return {
      {"t_cl_ground_au", p.t_cl_ground},
      {"t_cl_ground_ps", units::to_picoseconds(p.t_cl_ground)},
      {"t_cl_center_au", p.t_cl_center},
      {"t_cl_center_ps", units::to_picoseconds(p.t_cl_center)},
      {"t_rev_au", p.t_rev},
      {"t_rev_ps", units::to_picoseconds(p.t_rev)},
  };
}

json grid_json(const RadialGrid& g) {
  return {{"r_min", g.r_min}, {"r_max", g.r_max}, {"count", g.count}};
}

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "PASS";
    case CheckStatus::fail:
      return "FAIL";
    case CheckStatus::degraded:
      return "DEGRADED";
  }
  return "?";
}

Check make_check(std::string name, double value, double tolerance, std::string detail = {}) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.tolerance = tolerance;
  c.status = value <= tolerance ? CheckStatus::pass : CheckStatus::fail;
  c.detail = std::move(detail);
  return c;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void fd_checks(const RunConfig& cfg, int j, std::vector<Check>& out) {
  const auto ch = approx_channel(cfg.molecule, j);
  const int k = std::min(cfg.validate.max_level, ch.n_max);
  const auto fd = fd_spectrum_oracle(cfg.molecule, j, cfg.validate.fd_grid, k);
  double worst = 0.0;
  int worst_n = 0;
  for (int n = 0; n <= k; ++n) {
    double e = level(ch, n).energy;
    const double x = n + 0.5;
    e -= cfg.validate.perturb_energy * ch.c2 / (ch.lambda * ch.lambda) * x * x;
    const double diff = std::abs(e - fd[n]);
    if (diff > worst) {
      worst = diff;
      worst_n = n;
    }
  }
  const double tol = j == 0 ? 1e-5 : 2e-5;
  out.push_back(make_check("fd_spectrum_j" + std::to_string(j), worst, tol,
                           "max |E_analytic - E_fd| over n <= " + std::to_string(k) +
                               ", worst at n = " + std::to_string(worst_n)));
}

void orthonormality_check(const RunConfig& cfg, int j, std::vector<Check>& out) {
  const auto ch = approx_channel(cfg.molecule, j);
  const int k = std::min(cfg.validate.max_level, ch.n_max);
  const auto& grid = cfg.validate.orthonormality_grid;
  const auto g = gram_matrix(ch, k, ch, k, grid);
  double dev = 0.0;
  for (int a = 0; a <= k; ++a) {
    for (int b = 0; b <= k; ++b) dev = std::max(dev, std::abs(g[a][b] - (a == b ? 1.0 : 0.0)));
  }
  // The 1e-6 tolerance is pinned at 4096 points; coarser grids get a
  // second-order-scaled tolerance and are flagged.
  constexpr std::size_t kReferenceCount = 4096;
  double tol = 1e-6;
  const bool coarse = grid.count < kReferenceCount;
  if (coarse) {
    const double scale = static_cast<double>(kReferenceCount) / static_cast<double>(grid.count);
    tol *= scale * scale;
  }
  auto c = make_check("orthonormality_j" + std::to_string(j), dev, tol,
                      "max |G - I| for n, m <= " + std::to_string(k) + " on " +
                          std::to_string(grid.count) + " points");
  if (coarse && c.status == CheckStatus::pass) {
    c.status = CheckStatus::degraded;
    c.detail += "; grid below 4096 points, tolerance degraded";
  }
  out.push_back(std::move(c));
}

void wigner_checks(const RunConfig& cfg, std::vector<Check>& out) {
  const auto cs = build_cs(approx_channel(cfg.molecule, 0), cfg.alpha, cfg.n_prime);
  const double t_rev = revival_time(cs.channel);
  const auto& spec = cfg.phase_space;
  const RadialGrid sgrid = state_grid_for(spec, cs);
  const PacketEvaluator eval(cs, sgrid);
  const std::vector<TimeSpec> times{TimeSpec::fraction(0, 1), TimeSpec::fraction(1, 4)};
  for (const auto& ts : times) {
    const std::string tag = "wigner_j0_t" + ts.label;
    const auto state = eval.at(ts.resolve(t_rev));
    const auto w = wigner_transform(state, spec);
    const double w_max = *std::max_element(w.values.begin(), w.values.end(),
                                           [](double a, double b) { return std::abs(a) < std::abs(b); });
    const double w_abs = std::abs(w_max);

    out.push_back(make_check(tag + "_normalization", w.normalization_defect(), 1e-3,
                             "|1 - integral W|"));

    const auto rho = density(state);
    const double h = sgrid.spacing();
    std::vector<double> rho_rows(spec.n_r);
    for (std::size_t i = 0; i < spec.n_r; ++i) {
      const auto idx = static_cast<std::size_t>(std::lround((spec.r_at(i) - sgrid.r_min) / h));
      rho_rows[i] = rho[idx];
    }
    out.push_back(make_check(tag + "_position_marginal",
                             max_abs_diff(marginal_position(w), rho_rows), 1e-3,
                             "L-inf of integral W dp - |Phi(r)|^2"));

    std::vector<double> p(spec.n_p);
    for (std::size_t k = 0; k < spec.n_p; ++k) p[k] = spec.p_at(k);
    out.push_back(make_check(tag + "_momentum_marginal",
                             max_abs_diff(marginal_momentum(w), momentum_density(state, p)), 1e-3,
                             "L-inf of integral W dr - |Phi~(p)|^2"));

    out.push_back(make_check(tag + "_realness", w.max_imag_residue / w_abs, 1e-10,
                             "max |Im W| / max |W|"));
    out.push_back(make_check(tag + "_bound", w_abs * units::kPi, 1.01, "max |W| * pi"));

    double spot = 0.0;
    for (std::size_t a = 1; a <= 4; ++a) {
      for (std::size_t b = 1; b <= 4; ++b) {
        const std::size_t i = a * (spec.n_r - 1) / 5;
        const std::size_t k = b * (spec.n_p - 1) / 5;
        const double direct = wigner_direct(state, spec.r_at(i), spec.p_at(k));
        spot = std::max(spot, std::abs(direct - w.at(i, k)));
      }
    }
    out.push_back(make_check(tag + "_direct_quadrature", spot / w_abs, 1e-8,
                             "16 spot points, relative to max |W|"));
  }
}

void unitarity_check(const RunConfig& cfg, int j, std::vector<Check>& out) {
  const auto cs = build_cs(approx_channel(cfg.molecule, j), cfg.alpha, cfg.n_prime);
  const auto grid = adequate_grid(cs.channel, significant_top(cs), cfg.radial_grid);
  const PacketEvaluator eval(cs, grid);
  const double t_rev = revival_time(cs.channel);
  double worst = 0.0;
  constexpr int kSamples = 50;
  for (int i = 0; i < kSamples; ++i) {
    worst = std::max(worst, eval.at(t_rev * i / (kSamples - 1)).norm_defect);
  }
  out.push_back(make_check("unitarity_j" + std::to_string(j), worst, 1e-6,
                           "max |1 - norm| over 50 times in [0, T_rev]"));
}

void revival_check(const RunConfig& cfg, std::vector<Check>& out) {
  const auto cs = build_cs(approx_channel(cfg.molecule, 0), cfg.alpha, cfg.n_prime);
  const double t_rev = revival_time(cs.channel);
  const double times[] = {t_rev};
  const Complex a = autocorrelation(cs, times).front();
  // At T_rev the quadratic phases are multiples of 2 pi up to a common pi/2;
  // what remains is the linear part of the spectrum.
  const double slope = 2.0 * cs.channel.c1 / cs.channel.lambda;
  Complex linear{0.0, 0.0};
  for (const int n : cs.active) linear += cs.weight(n) * std::polar(1.0, -slope * (n + 0.5) * t_rev);
  auto c = make_check("revival_phase_structure", std::abs(std::abs(a) - std::abs(linear)), 1e-9,
                      "|A(T_rev)| = " + fmt(std::abs(a)) + " against the linear-phase sum");
  out.push_back(std::move(c));
}

}  // namespace

std::vector<Check> run_checks(const RunConfig& cfg) {
  std::vector<Check> out;
  for (const int j : cfg.j_list) fd_checks(cfg, j, out);
  for (const int j : cfg.j_list) orthonormality_check(cfg, j, out);
  wigner_checks(cfg, out);
  for (const int j : cfg.j_list) unitarity_check(cfg, j, out);
  revival_check(cfg, out);
  return out;
}

int cmd_channel(const RunConfig& cfg, std::ostream& log) {
  const auto rows = channel_sweep(cfg.molecule, cfg.j_list);
  std::vector<std::vector<std::string>> cells;
  std::string failures;
  for (const auto& row : rows) {
    std::vector<std::string> line{std::to_string(row.j), fmt(row.rj_approx),
                                  row.rj_solved ? fmt(*row.rj_solved) : "", fmt(row.dj)};
    if (row.channel) {
      const auto& ch = *row.channel;
      for (const double v : {ch.c0, ch.c1, ch.c2, ch.lambda, ch.lambda_bar}) line.push_back(fmt(v));
      line.push_back(std::to_string(ch.n_max));
    } else {
      line.insert(line.end(), 6, "");
    }
    cells.push_back(std::move(line));
    if (!row.error.empty()) failures += (failures.empty() ? "" : "; ") + row.error;
  }
  const auto path = cfg.out_dir / "channel.csv";
  io::write_csv(path,
                {"j", "rj_approx", "rj_solved", "Dj", "c0", "c1", "c2", "lambda", "lambda_bar",
                 "n_max"},
                cells);
  log << "wrote " << path.string() << '\n';
  if (!failures.empty()) throw SolverError(failures);
  return kOk;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& log) {
  for (const int j : cfg.j_list) {
    const auto cs = build_cs(approx_channel(cfg.molecule, j), cfg.alpha, cfg.n_prime);
    const auto grid = adequate_grid(cs.channel, significant_top(cs), cfg.radial_grid);
    const PacketEvaluator eval(cs, grid);
    const auto per = periods(cs);

    json levels = json::array();
    for (const int n : cs.active) {
      levels.push_back({{"n", n}, {"energy", cs.levels[n].energy}, {"weight", cs.weight(n)}});
    }

    for (std::size_t ti = 0; ti < cfg.times.size(); ++ti) {
      const auto& ts = cfg.times[ti];
      const double t = ts.resolve(per.t_rev);
      const auto state = eval.at(t);
      const auto rho = density(state);
      std::vector<std::vector<std::string>> cells;
      cells.reserve(rho.size());
      for (std::size_t i = 0; i < rho.size(); ++i) cells.push_back({fmt(grid.at(i)), fmt(rho[i])});
      const auto base = cfg.out_dir / stem("evolve", j, ti);
      io::write_csv(base.string() + ".csv", {"r", "density"}, cells);

      const auto peaks = density_peaks(grid, rho);
      json side{
          {"j", j},
          {"alpha", cs.alpha},
          {"n_prime", cs.n_prime},
          {"peak_level", cs.peak_index},
          {"time", {{"label", ts.label}, {"au", t}, {"ps", units::to_picoseconds(t)}}},
          {"periods", periods_json(per)},
          {"grid", grid_json(grid)},
          {"norm_defect", state.norm_defect},
          {"peaks", peaks.positions},
          {"ripple_spacing", peaks.mean_spacing ? json(*peaks.mean_spacing) : json(nullptr)},
          {"levels", levels},
      };
      io::write_json(base.string() + ".json", side);
      log << "wrote " << base.string() << ".csv\n";
    }
  }
  return kOk;
}

int cmd_wigner(const RunConfig& cfg, std::ostream& log) {
  const auto& spec = cfg.phase_space;
  for (const int j : cfg.j_list) {
    const auto cs = build_cs(approx_channel(cfg.molecule, j), cfg.alpha, cfg.n_prime);
    const auto sgrid = state_grid_for(spec, cs);
    const PacketEvaluator eval(cs, sgrid);
    const double t_rev = revival_time(cs.channel);
    const double sigma_r = position_spread(sgrid, density(eval.at(0.0)));
    const double sigma_p = 0.5 / sigma_r;

    for (std::size_t ti = 0; ti < cfg.times.size(); ++ti) {
      const auto& ts = cfg.times[ti];
      const double t = ts.resolve(t_rev);
      const auto w = wigner_transform(eval.at(t), spec);
      const auto base = cfg.out_dir / stem("wigner", j, ti);
      if (cfg.format == OutputFormat::bin) {
        io::write_wigner_binary(base.string() + ".wgr", w);
      } else {
        io::write_wigner_csv(base.string() + ".csv", w);
      }

      json side{
          {"j", j},
          {"time", {{"label", ts.label}, {"au", t}, {"ps", units::to_picoseconds(t)}}},
          {"grid",
           {{"r_min", spec.r_min}, {"r_max", spec.r_max}, {"n_r", spec.n_r},
            {"p_min", spec.p_min}, {"p_max", spec.p_max}, {"n_p", spec.n_p}}},
          {"state_grid", grid_json(sgrid)},
          {"integral", w.integral},
          {"normalization_defect", w.normalization_defect()},
          {"max_imag_residue", w.max_imag_residue},
      };
      const double p_slice = std::clamp(0.0, spec.p_min, spec.p_max);
      const auto m = interference_metrics(w, SliceAxis::position, p_slice);
      side["min_w"] = m.min_w;
      side["max_w"] = m.max_w;
      side["negativity_volume"] = m.negativity_volume;
      side["fringe_slice_p"] = p_slice;
      side["fringe_count"] = m.fringe_count;
      side["fringe_spacing"] = m.fringe_spacing ? json(*m.fringe_spacing) : json(nullptr);
      json lobes = json::array();
      for (const auto& lobe : find_lobes(w, sigma_r, sigma_p)) {
        lobes.push_back({{"r", lobe.r}, {"p", lobe.p}, {"height", lobe.height}});
      }
      side["lobes"] = lobes;
      side["smoothing"] = {{"sigma_r", sigma_r}, {"sigma_p", sigma_p}};
      io::write_json(base.string() + ".json", side);
      log << "wrote " << base.string() << (cfg.format == OutputFormat::bin ? ".wgr\n" : ".csv\n");
    }
  }
  return kOk;
}

int cmd_rotate(const RunConfig& cfg, std::ostream& log) {
  const std::set<int> unique(cfg.j_list.begin(), cfg.j_list.end());
  const std::vector<int> js(unique.begin(), unique.end());
  const double t = cfg.rotation_time.resolve(revival_time(approx_channel(cfg.molecule, 0)));
  const auto rows =
      angle_sweep(cfg.molecule, js, t, cfg.alpha, cfg.n_prime, cfg.overlap_grid, cfg.coarse_steps);
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : rows) {
    cells.push_back({std::to_string(row.j), fmt(row.phi), fmt(row.phi / units::kPi),
                     fmt(row.overlap), fmt(row.phi_unwrapped), row.degenerate ? "1" : "0"});
  }
  const auto path = cfg.out_dir / "rotation.csv";
  io::write_csv(path, {"j", "phi_rad", "phi_over_pi", "overlap", "phi_unwrapped_rad", "degenerate"},
                cells);
  log << "wrote " << path.string() << '\n';
  return kOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& log) {
  const auto checks = run_checks(cfg);
  json report = json::array();
  bool failed = false;
  for (const auto& c : checks) {
    log << status_name(c.status) << "  " << c.name << "  value=" << fmt(c.value)
        << "  tol=" << fmt(c.tolerance);
    if (!c.detail.empty()) log << "  (" << c.detail << ')';
    log << '\n';
    failed = failed || c.status == CheckStatus::fail;
    report.push_back({{"name", c.name},
                      {"value", c.value},
                      {"tolerance", c.tolerance},
                      {"status", status_name(c.status)},
                      {"detail", c.detail}});
  }
  const auto path = cfg.out_dir / "validation.json";
  io::write_json(path, {{"passed", !failed}, {"checks", report}});
  log << (failed ? "validation FAILED" : "validation passed") << "; wrote " << path.string() << '\n';
  return failed ? kValidationFailed : kOk;
}

int dispatch(const std::string& command, const RunConfig& cfg, std::ostream& log,
             std::ostream& err) {
  try {
    if (command == "channel") return cmd_channel(cfg, log);
    if (command == "evolve") return cmd_evolve(cfg, log);
    if (command == "wigner") return cmd_wigner(cfg, log);
    if (command == "rotate") return cmd_rotate(cfg, log);
    if (command == "validate") return cmd_validate(cfg, log);
    err << "unknown command: " << command << '\n';
    return kFailure;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return kSolverError;
  } catch (const CoverageError& e) {
    err << "coverage error: " << e.what() << '\n';
    return kCoverageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace rotmorse::cli
