#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rotmorse/wigner.hpp"

namespace rotmorse::io {

/// Fixed 12-significant-digit rendering used for every CSV cell.
std::string format_number(double value);

/// Comma-joined header line plus one line per row; cells are written verbatim.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// `r,p,W` triples, one line per lattice point, r outer.
void write_wigner_csv(const std::filesystem::path& path, const PhaseSpaceGrid& grid);

/// "WGR1", u32 n_r, u32 n_p, f64 r_min, r_max, p_min, p_max, then n_r*n_p f64
/// values row-major in r.  All integers and floats little-endian.
void write_wigner_binary(const std::filesystem::path& path, const PhaseSpaceGrid& grid);

/// Reads a file written by write_wigner_binary.  Throws std::runtime_error on
/// a bad magic, truncated payload or trailing bytes.
PhaseSpaceGrid read_wigner_binary(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace rotmorse::io
