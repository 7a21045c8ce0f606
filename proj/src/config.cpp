#include "rotmorse/config.hpp"

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <string_view>

#include "rotmorse/errors.hpp"

namespace rotmorse {

namespace {

using nlohmann::json;

void reject_unknown(const json& node, std::string_view where,
                    std::initializer_list<std::string_view> allowed) {
  if (!node.is_object()) throw ConfigError(std::string(where) + ": expected a JSON object");
  for (const auto& item : node.items()) {
    bool known = false;
    for (const auto key : allowed) known = known || item.key() == key;
    if (!known) throw ConfigError(std::string(where) + ": unknown key \"" + item.key() + "\"");
  }
}

double read_number(const json& node, std::string_view where) {
  if (!node.is_number()) throw ConfigError(std::string(where) + ": expected a number");
  return node.get<double>();
}

long read_integer(const json& node, std::string_view where) {
  if (!node.is_number_integer()) throw ConfigError(std::string(where) + ": expected an integer");
  return node.get<long>();
}

RadialGrid read_radial_grid(const json& node, RadialGrid grid, std::string_view where) {
  reject_unknown(node, where, {"r_min", "r_max", "count"});
  const std::string w(where);
  if (node.contains("r_min")) grid.r_min = read_number(node["r_min"], w + ".r_min");
  if (node.contains("r_max")) grid.r_max = read_number(node["r_max"], w + ".r_max");
  if (node.contains("count")) {
    const long count = read_integer(node["count"], w + ".count");
    if (count < 2) throw ConfigError(w + ".count: need at least 2 points");
    grid.count = static_cast<std::size_t>(count);
  }
  try {
    grid.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(w + ": " + e.what());
  }
  return grid;
}

std::vector<int> read_j_list(const json& node) {
  std::vector<int> out;
  if (node.is_array()) {
    for (const auto& v : node) out.push_back(static_cast<int>(read_integer(v, "j[]")));
  } else if (node.is_object()) {
    reject_unknown(node, "j", {"start", "stop", "step"});
    const long start = node.contains("start") ? read_integer(node["start"], "j.start") : 0;
    if (!node.contains("stop")) throw ConfigError("j: range needs \"stop\"");
    const long stop = read_integer(node["stop"], "j.stop");
    const long step = node.contains("step") ? read_integer(node["step"], "j.step") : 1;
    if (step <= 0) throw ConfigError("j.step: must be positive");
    for (long j = start; j <= stop; j += step) out.push_back(static_cast<int>(j));
  } else if (node.is_number_integer()) {
    out.push_back(static_cast<int>(node.get<long>()));
  } else {
    throw ConfigError("j: expected an integer, an array of integers, or a {start, stop, step} range");
  }
  if (out.empty()) throw ConfigError("j: list is empty");
  for (const int j : out) {
    if (j < 0) throw ConfigError("j: rotational quantum numbers must be non-negative");
  }
  return out;
}

}  // namespace

TimeSpec TimeSpec::fraction(long numerator, long denominator) {
  TimeSpec t;
  t.fraction_of_revival = true;
  t.value = static_cast<double>(numerator) / static_cast<double>(denominator);
  t.label = denominator == 1 ? std::to_string(numerator)
                             : std::to_string(numerator) + "/" + std::to_string(denominator);
  return t;
}

TimeSpec TimeSpec::parse(const json& node) {
  if (node.is_number()) {
    TimeSpec t;
    t.fraction_of_revival = false;
    t.value = node.get<double>();
    t.label = node.dump();
    return t;
  }
  if (!node.is_string()) throw ConfigError("time: expected a number (a.u.) or a string fraction");
  const std::string text = node.get<std::string>();
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    long num = 0;
    long den = 0;
    const std::string_view a(text.data(), slash);
    const std::string_view b(text.data() + slash + 1, text.size() - slash - 1);
    const auto ra = std::from_chars(a.data(), a.data() + a.size(), num);
    const auto rb = std::from_chars(b.data(), b.data() + b.size(), den);
    if (ra.ec != std::errc{} || ra.ptr != a.data() + a.size() || rb.ec != std::errc{} ||
        rb.ptr != b.data() + b.size() || den <= 0) {
      throw ConfigError("time: cannot parse fraction \"" + text + "\"");
    }
    TimeSpec t = fraction(num, den);
    t.label = text;
    return t;
  }
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ConfigError("time: cannot parse \"" + text + "\"");
  }
  TimeSpec t;
  t.fraction_of_revival = true;
  t.value = value;
  t.label = text;
  return t;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "bin") return OutputFormat::bin;
  throw ConfigError("format: expected \"csv\" or \"bin\", got \"" + name + "\"");
}

RunConfig parse_config(const json& doc) {
  RunConfig cfg;
  reject_unknown(doc, "config",
                 {"molecule", "j", "alpha", "n_prime", "times", "radial_grid", "phase_space",
                  "rotation", "validate", "output"});

  if (doc.contains("molecule")) {
    const auto& m = doc["molecule"];
    reject_unknown(m, "molecule", {"beta", "mu", "r0", "d"});
    if (m.contains("beta")) cfg.molecule.beta = read_number(m["beta"], "molecule.beta");
    if (m.contains("mu")) cfg.molecule.mu = read_number(m["mu"], "molecule.mu");
    if (m.contains("r0")) cfg.molecule.r0 = read_number(m["r0"], "molecule.r0");
    if (m.contains("d")) cfg.molecule.d = read_number(m["d"], "molecule.d");
    try {
      cfg.molecule.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("molecule: ") + e.what());
    }
  }
  if (doc.contains("j")) cfg.j_list = read_j_list(doc["j"]);
  if (doc.contains("alpha")) {
    cfg.alpha = read_number(doc["alpha"], "alpha");
    if (cfg.alpha == 0.0) throw ConfigError("alpha: must be nonzero");
  }
  if (doc.contains("n_prime")) {
    const auto& np = doc["n_prime"];
    if (np.is_string() && np.get<std::string>() == "auto") {
      cfg.n_prime.reset();
    } else {
      const long v = read_integer(np, "n_prime");
      if (v < 0) throw ConfigError("n_prime: must be non-negative or \"auto\"");
      cfg.n_prime = static_cast<int>(v);
    }
  }
  if (doc.contains("times")) {
    const auto& ts = doc["times"];
    if (!ts.is_array() || ts.empty()) throw ConfigError("times: expected a non-empty array");
    cfg.times.clear();
    for (const auto& t : ts) cfg.times.push_back(TimeSpec::parse(t));
  }
  if (doc.contains("radial_grid")) {
    cfg.radial_grid = read_radial_grid(doc["radial_grid"], cfg.radial_grid, "radial_grid");
  }
  if (doc.contains("phase_space")) {
    const auto& ps = doc["phase_space"];
    reject_unknown(ps, "phase_space", {"r_min", "r_max", "n_r", "p_min", "p_max", "n_p"});
    auto& spec = cfg.phase_space;
    if (ps.contains("r_min")) spec.r_min = read_number(ps["r_min"], "phase_space.r_min");
    if (ps.contains("r_max")) spec.r_max = read_number(ps["r_max"], "phase_space.r_max");
    if (ps.contains("p_min")) spec.p_min = read_number(ps["p_min"], "phase_space.p_min");
    if (ps.contains("p_max")) spec.p_max = read_number(ps["p_max"], "phase_space.p_max");
    if (ps.contains("n_r")) {
      const long n = read_integer(ps["n_r"], "phase_space.n_r");
      if (n < 2) throw ConfigError("phase_space.n_r: need at least 2 points");
      spec.n_r = static_cast<std::size_t>(n);
    }
    if (ps.contains("n_p")) {
      const long n = read_integer(ps["n_p"], "phase_space.n_p");
      if (n < 2) throw ConfigError("phase_space.n_p: need at least 2 points");
      spec.n_p = static_cast<std::size_t>(n);
    }
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("phase_space: ") + e.what());
    }
  }
  if (doc.contains("rotation")) {
    const auto& rot = doc["rotation"];
    reject_unknown(rot, "rotation", {"time", "coarse_steps", "grid"});
    if (rot.contains("time")) cfg.rotation_time = TimeSpec::parse(rot["time"]);
    if (rot.contains("coarse_steps")) {
      const long steps = read_integer(rot["coarse_steps"], "rotation.coarse_steps");
      if (steps < 3) throw ConfigError("rotation.coarse_steps: need at least 3");
      cfg.coarse_steps = static_cast<std::size_t>(steps);
    }
    if (rot.contains("grid")) {
      cfg.overlap_grid = read_radial_grid(rot["grid"], cfg.overlap_grid, "rotation.grid");
    }
  }
  if (doc.contains("validate")) {
    const auto& v = doc["validate"];
    reject_unknown(v, "validate", {"fd_grid", "orthonormality_grid", "max_level", "perturb_energy"});
    if (v.contains("fd_grid")) {
      cfg.validate.fd_grid = read_radial_grid(v["fd_grid"], cfg.validate.fd_grid, "validate.fd_grid");
    }
    if (v.contains("orthonormality_grid")) {
      cfg.validate.orthonormality_grid = read_radial_grid(
          v["orthonormality_grid"], cfg.validate.orthonormality_grid, "validate.orthonormality_grid");
    }
    if (v.contains("max_level")) {
      const long k = read_integer(v["max_level"], "validate.max_level");
      if (k < 0 || k > 30) throw ConfigError("validate.max_level: must be in 0..30");
      cfg.validate.max_level = static_cast<int>(k);
    }
    if (v.contains("perturb_energy")) {
      cfg.validate.perturb_energy = read_number(v["perturb_energy"], "validate.perturb_energy");
    }
  }
  if (doc.contains("output")) {
    const auto& out = doc["output"];
    reject_unknown(out, "output", {"directory", "format"});
    if (out.contains("directory")) {
      if (!out["directory"].is_string()) throw ConfigError("output.directory: expected a string");
      cfg.out_dir = out["directory"].get<std::string>();
    }
    if (out.contains("format")) {
      if (!out["format"].is_string()) throw ConfigError("output.format: expected a string");
      cfg.format = parse_format(out["format"].get<std::string>());
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

}  // namespace rotmorse
