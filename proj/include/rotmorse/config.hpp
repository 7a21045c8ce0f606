#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rotmorse/eigensystem.hpp"
#include "rotmorse/molecule.hpp"
#include "rotmorse/wigner.hpp"

namespace rotmorse {

/// A time either in atomic units or as an exact fraction of the revival time.
///
/// JSON numbers are absolute atomic units; JSON strings are fractions of
/// T_rev, written "p/q" (e.g. "1/4") or as a decimal ("0.25").
struct TimeSpec {
  bool fraction_of_revival = true;
  double value = 0.0;
  std::string label = "0";

  double resolve(double t_rev) const { return fraction_of_revival ? value * t_rev : value; }

  static TimeSpec parse(const nlohmann::json& node);
  static TimeSpec fraction(long numerator, long denominator);
};

enum class OutputFormat { csv, bin };

struct ValidateOptions {
  RadialGrid fd_grid{3.8, 8.5, 4096};
  RadialGrid orthonormality_grid{3.8, 8.5, 4096};
  int max_level = 20;
  /// Test hook: adds this multiple of the anharmonic term to analytic energies.
  double perturb_energy = 0.0;
};

struct RunConfig {
  MoleculeParams molecule = MoleculeParams::iodine();
  std::vector<int> j_list{0, 60, 81};
  double alpha = 2.15;
  std::optional<int> n_prime;  ///< empty: top of each channel's bound ladder
  std::vector<TimeSpec> times{TimeSpec::fraction(0, 1), TimeSpec::fraction(1, 8),
                              TimeSpec::fraction(1, 4), TimeSpec::fraction(1, 2)};
  RadialGrid radial_grid{4.2, 7.0, 2048};
  PhaseSpaceSpec phase_space{};
  TimeSpec rotation_time = TimeSpec::fraction(1, 4);
  std::size_t coarse_steps = 720;
  RadialGrid overlap_grid{3.8, 8.5, 4096};
  ValidateOptions validate{};
  std::filesystem::path out_dir = "out";
  OutputFormat format = OutputFormat::csv;
};

/// Builds a configuration from a JSON document, starting from the defaults.
/// Unknown keys and invalid values raise ConfigError.
RunConfig parse_config(const nlohmann::json& doc);

/// Reads and parses a JSON configuration file.  Throws ConfigError.
RunConfig load_config(const std::filesystem::path& path);

OutputFormat parse_format(const std::string& name);

}  // namespace rotmorse
