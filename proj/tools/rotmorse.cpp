#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rotmorse/commands.hpp"
#include "rotmorse/config.hpp"
#include "rotmorse/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Rotating Morse wave-packet simulator"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  std::string format;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--format", format, "Grid output format")->check(CLI::IsMember({"csv", "bin"}));

  for (const auto* name : {"channel", "evolve", "wigner", "rotate", "validate"}) {
    app.add_subcommand(name)->fallthrough();
  }
  app.get_subcommand("channel")->description("Channel constants per j");
  app.get_subcommand("evolve")->description("Position densities at the configured times");
  app.get_subcommand("wigner")->description("Wigner distributions at the configured times");
  app.get_subcommand("rotate")->description("Phase-space rotation angle per j");
  app.get_subcommand("validate")->description("Run the oracle and property checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rotmorse::cli::kConfigError;
  }

  rotmorse::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = rotmorse::load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!format.empty()) cfg.format = rotmorse::parse_format(format);
  } catch (const rotmorse::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return rotmorse::cli::kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  return rotmorse::cli::dispatch(command, cfg, std::cout, std::cerr);
}
