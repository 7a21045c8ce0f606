#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "rotmorse/commands.hpp"
#include "rotmorse/config.hpp"
#include "rotmorse/io.hpp"

using namespace rotmorse;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "rotmorse_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig config_in(const fs::path& dir, const std::string& doc) {
  auto cfg = parse_config(json::parse(doc));
  cfg.out_dir = dir;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& command, const RunConfig& cfg, std::string* err_text = nullptr) {
  std::ostringstream log;
  std::ostringstream err;
  const int code = cli::dispatch(command, cfg, log, err);
  if (err_text) *err_text = err.str();
  return code;
}

int run_exe(const std::string& args) {
  const std::string cmd = std::string(ROTMORSE_EXE) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("channel table") {
  const auto dir = fresh_dir("channel");
  REQUIRE(run("channel", config_in(dir, R"({"j": [0, 60]})")) == cli::kOk);
  const std::string text = slurp(dir / "channel.csv");
  std::istringstream lines(text);
  std::string header, row0, row60;
  std::getline(lines, header);
  std::getline(lines, row0);
  std::getline(lines, row60);
  CHECK(header == "j,rj_approx,rj_solved,Dj,c0,c1,c2,lambda,lambda_bar,n_max");
  CHECK(row0.rfind("0,5.03,5.03,0.057,0,0.057,0.057,", 0) == 0);
  CHECK(row60.rfind("60,5.0322", 0) == 0);
}

TEST_CASE("channel solver failure names the j") {
  const auto dir = fresh_dir("channel_fail");
  std::string err;
  CHECK(run("channel", config_in(dir, R"({"j": [60, 5000]})"), &err) == cli::kSolverError);
  CHECK(err.find("5000") != std::string::npos);
  CHECK(fs::exists(dir / "channel.csv"));
}

TEST_CASE("evolve writes densities and sidecars") {
  const auto dir = fresh_dir("evolve");
  const auto cfg = config_in(dir, R"({"j": [0], "times": ["0", "1/4"]})");
  REQUIRE(run("evolve", cfg) == cli::kOk);
  const auto csv = slurp(dir / "evolve_j0_t1.csv");
  CHECK(csv.rfind("r,density\n", 0) == 0);
  const auto t0 = json::parse(slurp(dir / "evolve_j0_t0.json"));
  CHECK(t0["peaks"].size() == 1);
  const auto side = json::parse(slurp(dir / "evolve_j0_t1.json"));
  REQUIRE(side["peaks"].size() == 2);
  CHECK(side["peaks"][0].get<double>() == doctest::Approx(4.70).epsilon(0.01));
  CHECK(side["peaks"][1].get<double>() == doctest::Approx(5.58).epsilon(0.01));
  CHECK(side["periods"]["t_rev_ps"].get<double>() == doctest::Approx(36.2).epsilon(0.003));
  CHECK(side["levels"].size() > 20);

  // Identical configuration, identical bytes.
  const auto again = fresh_dir("evolve_again");
  auto cfg2 = cfg;
  cfg2.out_dir = again;
  REQUIRE(run("evolve", cfg2) == cli::kOk);
  CHECK(slurp(again / "evolve_j0_t1.csv") == csv);
}

TEST_CASE("ripple spacing in the evolve sidecar") {
  const auto dir = fresh_dir("ripple");
  REQUIRE(run("evolve", config_in(dir, R"({"j": [81], "times": ["1/4"]})")) == cli::kOk);
  const auto side = json::parse(slurp(dir / "evolve_j81_t0.json"));
  CHECK(side["ripple_spacing"].get<double>() == doctest::Approx(0.07).epsilon(0.3));
}

TEST_CASE("wigner binary output") {
  const auto dir = fresh_dir("wigner");
  auto cfg = config_in(dir, R"({"j": [0], "times": ["1/8"], "output": {"format": "bin"}})");
  REQUIRE(run("wigner", cfg) == cli::kOk);
  const auto grid = io::read_wigner_binary(dir / "wigner_j0_t0.wgr");
  CHECK(grid.spec.n_r == 256);
  CHECK(grid.spec.n_p == 256);
  const auto side = json::parse(slurp(dir / "wigner_j0_t0.json"));
  CHECK(side["lobes"].size() == 4);
  CHECK(side["min_w"].get<double>() < 0.0);
  CHECK(side.contains("negativity_volume"));
  CHECK(side.contains("normalization_defect"));

  const auto again = fresh_dir("wigner_again");
  cfg.out_dir = again;
  REQUIRE(run("wigner", cfg) == cli::kOk);
  CHECK(slurp(again / "wigner_j0_t0.wgr") == slurp(dir / "wigner_j0_t0.wgr"));
}

TEST_CASE("rotate sorts and deduplicates j") {
  const auto dir = fresh_dir("rotate");
  REQUIRE(run("rotate", config_in(dir, R"({"j": [81, 0, 81]})")) == cli::kOk);
  std::istringstream lines(slurp(dir / "rotation.csv"));
  std::string header, a, b, extra;
  std::getline(lines, header);
  std::getline(lines, a);
  std::getline(lines, b);
  CHECK(header == "j,phi_rad,phi_over_pi,overlap,phi_unwrapped_rad,degenerate");
  CHECK(a.rfind("0,", 0) == 0);
  CHECK(a.find(",1,") != std::string::npos);
  CHECK(b.rfind("81,", 0) == 0);
  CHECK(!std::getline(lines, extra));
}

TEST_CASE("validate passes on defaults and fails on a perturbed spectrum") {
  const auto dir = fresh_dir("validate");
  CHECK(run("validate", config_in(dir, R"({"j": [0]})")) == cli::kOk);
  const auto report = json::parse(slurp(dir / "validation.json"));
  CHECK(report["passed"].get<bool>());

  const auto bad = fresh_dir("validate_bad");
  CHECK(run("validate", config_in(bad, R"({"j": [0], "validate": {"perturb_energy": 0.05}})")) ==
        cli::kValidationFailed);
  const auto bad_report = json::parse(slurp(bad / "validation.json"));
  bool fd_failed = false;
  for (const auto& c : bad_report["checks"]) {
    if (c["name"] == "fd_spectrum_j0") fd_failed = c["status"] == "FAIL";
  }
  CHECK(fd_failed);
}

TEST_CASE("coarse orthonormality grid is degraded, not failed") {
  const auto dir = fresh_dir("validate_coarse");
  const auto cfg = config_in(
      dir, R"({"j": [0], "validate": {"orthonormality_grid": {"count": 128}}})");
  CHECK(run("validate", cfg) == cli::kOk);
  const auto report = json::parse(slurp(dir / "validation.json"));
  bool degraded = false;
  for (const auto& c : report["checks"]) {
    if (c["name"] == "orthonormality_j0") degraded = c["status"] == "DEGRADED";
  }
  CHECK(degraded);
}

TEST_CASE("executable exit codes") {
  const auto dir = fresh_dir("exe");
  const auto zero = dir / "zero.json";
  std::ofstream(zero) << R"({"phase_space": {"n_r": 0, "n_p": 0}})";
  CHECK(run_exe("wigner --config " + zero.string() + " --out " + dir.string()) == 2);
  CHECK(run_exe("channel --config " + (dir / "nope.json").string()) == 2);
  CHECK(run_exe("frobnicate") == 2);

  const auto big = dir / "big.json";
  std::ofstream(big) << R"({"j": [5000]})";
  CHECK(run_exe("channel --config " + big.string() + " --out " + dir.string()) == 3);

  const auto one = dir / "one.json";
  std::ofstream(one) << R"({"j": [0]})";
  CHECK(run_exe("channel --config " + one.string() + " --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "channel.csv"));
}
