#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rotmorse/config.hpp"
#include "rotmorse/errors.hpp"
#include "rotmorse/io.hpp"

using namespace rotmorse;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "rotmorse_test_config_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("defaults") {
  const auto cfg = parse_config(json::object());
  CHECK(cfg.molecule.beta == 0.9849);
  CHECK(cfg.molecule.mu == 11.56e4);
  CHECK(cfg.molecule.r0 == 5.03);
  CHECK(cfg.molecule.d == 0.057);
  CHECK(cfg.j_list == std::vector<int>{0, 60, 81});
  CHECK(cfg.alpha == 2.15);
  CHECK(!cfg.n_prime.has_value());
  REQUIRE(cfg.times.size() == 4);
  CHECK(cfg.times[2].value == 0.25);
  CHECK(cfg.times[2].fraction_of_revival);
  CHECK(cfg.phase_space.n_r == 256);
  CHECK(cfg.phase_space.n_p == 256);
  CHECK(cfg.radial_grid.count == 2048);
  CHECK(cfg.format == OutputFormat::csv);
}

TEST_CASE("full document") {
  const auto cfg = parse_config(json::parse(R"({
    "molecule": {"beta": 1.0, "mu": 1e4, "r0": 4.0, "d": 0.1},
    "j": {"start": 0, "stop": 20, "step": 10},
    "alpha": 1.5,
    "n_prime": 30,
    "times": ["1/8", 0.5, "0.25"],
    "radial_grid": {"count": 1024},
    "phase_space": {"n_r": 64, "n_p": 128, "p_min": -30, "p_max": 30},
    "rotation": {"time": "1/4", "coarse_steps": 360, "grid": {"count": 2048}},
    "validate": {"max_level": 10, "perturb_energy": 0.1},
    "output": {"directory": "results", "format": "bin"}
  })"));
  CHECK(cfg.molecule.mu == 1e4);
  CHECK(cfg.j_list == std::vector<int>{0, 10, 20});
  CHECK(*cfg.n_prime == 30);
  CHECK(cfg.times[0].resolve(800.0) == doctest::Approx(100.0));
  CHECK(!cfg.times[1].fraction_of_revival);
  CHECK(cfg.times[1].resolve(800.0) == 0.5);
  CHECK(cfg.times[2].resolve(800.0) == doctest::Approx(200.0));
  CHECK(cfg.radial_grid.r_min == 4.2);
  CHECK(cfg.phase_space.n_p == 128);
  CHECK(cfg.coarse_steps == 360);
  CHECK(cfg.overlap_grid.count == 2048);
  CHECK(cfg.validate.max_level == 10);
  CHECK(cfg.out_dir == "results");
  CHECK(cfg.format == OutputFormat::bin);
}

TEST_CASE("rejections") {
  const char* bad[] = {
      R"({"jj": [0]})",
      R"({"molecule": {"beta": 1, "gamma": 2}})",
      R"({"molecule": {"mu": -1}})",
      R"({"j": []})",
      R"({"j": [-3]})",
      R"({"j": {"start": 5, "stop": 10, "step": 0}})",
      R"({"alpha": 0})",
      R"({"alpha": "big"})",
      R"({"n_prime": -2})",
      R"({"times": ["1/0"]})",
      R"({"times": ["a/4"]})",
      R"({"times": []})",
      R"({"phase_space": {"n_r": 0, "n_p": 0}})",
      R"({"phase_space": {"p_min": 5, "p_max": 1}})",
      R"({"radial_grid": {"r_min": 7, "r_max": 4}})",
      R"({"validate": {"max_level": 31}})",
      R"({"output": {"format": "xml"}})",
      R"([1, 2])",
  };
  for (const char* doc : bad) {
    CAPTURE(doc);
    CHECK_THROWS_AS(parse_config(json::parse(doc)), ConfigError);
  }
}

TEST_CASE("n_prime auto") {
  CHECK(!parse_config(json::parse(R"({"n_prime": "auto"})")).n_prime.has_value());
}

TEST_CASE("config files") {
  const auto path = scratch("run.json");
  std::ofstream(path) << R"({"j": [81], "alpha": 2.0})";
  const auto cfg = load_config(path);
  CHECK(cfg.j_list == std::vector<int>{81});
  CHECK_THROWS_AS(load_config(scratch("missing.json")), ConfigError);
  const auto broken = scratch("broken.json");
  std::ofstream(broken) << "{ not json";
  CHECK_THROWS_AS(load_config(broken), ConfigError);
}

TEST_CASE("number formatting") {
  CHECK(io::format_number(5.03) == "5.03");
  CHECK(io::format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(io::format_number(-0.046594812345678) == "-0.0465948123457");
  CHECK(io::format_number(0.0) == "0");
}

TEST_CASE("binary grid round trip") {
  PhaseSpaceGrid g;
  g.spec = PhaseSpaceSpec{4.2, 7.0, 3, -60.0, 60.0, 5};
  for (int i = 0; i < 15; ++i) g.values.push_back(std::sin(1.7 * i) / (i + 1.0));
  const auto path = scratch("grid.wgr");
  io::write_wigner_binary(path, g);

  const std::string bytes = slurp(path);
  REQUIRE(bytes.size() == 4 + 8 + 32 + 15 * 8);
  CHECK(bytes.substr(0, 4) == "WGR1");
  CHECK(static_cast<unsigned char>(bytes[4]) == 3);
  CHECK(static_cast<unsigned char>(bytes[8]) == 5);

  const auto back = io::read_wigner_binary(path);
  CHECK(back.spec.n_r == 3);
  CHECK(back.spec.n_p == 5);
  CHECK(back.spec.r_min == 4.2);
  CHECK(back.spec.p_max == 60.0);
  CHECK(back.values == g.values);

  io::write_wigner_binary(scratch("grid2.wgr"), back);
  CHECK(slurp(scratch("grid2.wgr")) == bytes);
}

TEST_CASE("binary reader rejects damage") {
  const auto path = scratch("bad.wgr");
  std::ofstream(path, std::ios::binary) << "WGR2xxxxxxxx";
  CHECK_THROWS(io::read_wigner_binary(path));
  PhaseSpaceGrid g;
  g.spec = PhaseSpaceSpec{4.2, 7.0, 2, -1.0, 1.0, 2};
  g.values = {1, 2, 3, 4};
  io::write_wigner_binary(path, g);
  std::string bytes = slurp(path);
  std::ofstream(path, std::ios::binary | std::ios::trunc) << bytes.substr(0, bytes.size() - 3);
  CHECK_THROWS(io::read_wigner_binary(path));
}

TEST_CASE("wigner csv") {
  PhaseSpaceGrid g;
  g.spec = PhaseSpaceSpec{1.0, 2.0, 2, -1.0, 1.0, 2};
  g.values = {0.1, 0.2, 0.3, 0.4};
  const auto path = scratch("w.csv");
  io::write_wigner_csv(path, g);
  CHECK(slurp(path) == "r,p,W\n1,-1,0.1\n1,1,0.2\n2,-1,0.3\n2,1,0.4\n");
}
