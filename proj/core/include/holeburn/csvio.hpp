#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "holeburn/fitkit.hpp"

namespace holeburn {

// Deterministic shortest-roundtrip formatting shared by all writers.
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::string, std::string> metadata;  // emitted as "# key=value"
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

// Decay-curve files: columns t_d_s, amplitude[, sigma]; metadata keys
// burn_duration_s, B_tesla, T_kelvin.
void write_decay_curve(const std::filesystem::path& path, const DecayCurve& curve);
DecayCurve read_decay_curve(const std::filesystem::path& path);

}  // namespace holeburn
