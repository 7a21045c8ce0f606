#include "rotmorse/io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace rotmorse::io {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path, bool binary) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  }
  out.write(bytes.data(), bytes.size());
}

void put_f64(std::ostream& out, double value) { put_le(out, std::bit_cast<std::uint64_t>(value)); }

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw std::runtime_error("WGR1: truncated file");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

}  // namespace

std::string format_number(double value) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.12g", value);
  return buf.data();
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  auto out = open_for_write(path, false);
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_wigner_csv(const std::filesystem::path& path, const PhaseSpaceGrid& grid) {
  auto out = open_for_write(path, false);
  out << "r,p,W\n";
  const auto& spec = grid.spec;
  for (std::size_t i = 0; i < spec.n_r; ++i) {
    const std::string r = format_number(spec.r_at(i));
    for (std::size_t k = 0; k < spec.n_p; ++k) {
      out << r << ',' << format_number(spec.p_at(k)) << ',' << format_number(grid.at(i, k)) << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_wigner_binary(const std::filesystem::path& path, const PhaseSpaceGrid& grid) {
  const auto& spec = grid.spec;
  if (spec.n_r > UINT32_MAX || spec.n_p > UINT32_MAX) {
    throw std::runtime_error("WGR1: grid dimensions exceed 32 bits");
  }
  auto out = open_for_write(path, true);
  out.write("WGR1", 4);
  put_le(out, static_cast<std::uint32_t>(spec.n_r));
  put_le(out, static_cast<std::uint32_t>(spec.n_p));
  put_f64(out, spec.r_min);
  put_f64(out, spec.r_max);
  put_f64(out, spec.p_min);
  put_f64(out, spec.p_max);
  for (const double w : grid.values) put_f64(out, w);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

PhaseSpaceGrid read_wigner_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || std::string(magic.data(), magic.size()) != "WGR1") {
    throw std::runtime_error("WGR1: bad magic in " + path.string());
  }
  PhaseSpaceGrid grid;
  grid.spec.n_r = get_le<std::uint32_t>(in);
  grid.spec.n_p = get_le<std::uint32_t>(in);
  grid.spec.r_min = get_f64(in);
  grid.spec.r_max = get_f64(in);
  grid.spec.p_min = get_f64(in);
  grid.spec.p_max = get_f64(in);
  grid.values.resize(grid.spec.n_r * grid.spec.n_p);
  for (auto& w : grid.values) w = get_f64(in);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw std::runtime_error("WGR1: trailing bytes in " + path.string());
  }
  return grid;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  auto out = open_for_write(path, false);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace rotmorse::io
