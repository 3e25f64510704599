#include "holeburn/csvio.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "holeburn/errors.hpp"

namespace holeburn {

std::string format_double(double x) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw NumericError("double formatting failed");
  return std::string(buf, end);
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  for (const auto& [k, v] : table.metadata) out << "# " << k << "=" << v << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw IoError("csv row width mismatch in " + path.string());
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  CsvTable table;
  std::string line;
  bool header_seen = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      const auto start = body.find_first_not_of(' ');
      if (start == std::string::npos) continue;
      body = body.substr(start);
      const auto eq = body.find('=');
      if (eq != std::string::npos)
        table.metadata[body.substr(0, eq)] = body.substr(eq + 1);
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!header_seen) {
      table.columns = cells;
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc{} || ptr != c.data() + c.size())
        throw IoError(path.string() + ":" + std::to_string(lineno) +
                      ": not a number: '" + c + "'");
      row.push_back(v);
    }
    if (row.size() != table.columns.size())
      throw IoError(path.string() + ":" + std::to_string(lineno) +
                    ": expected " + std::to_string(table.columns.size()) +
                    " columns");
    table.rows.push_back(std::move(row));
  }
  if (!header_seen) throw IoError("empty csv file: " + path.string());
  return table;
}

void write_decay_curve(const std::filesystem::path& path, const DecayCurve& curve) {
  CsvTable t;
  const bool has_sigma = !curve.points.empty() && curve.points.front().sigma > 0.0;
  t.columns = has_sigma ? std::vector<std::string>{"t_d_s", "amplitude", "sigma"}
                        : std::vector<std::string>{"t_d_s", "amplitude"};
  if (curve.meta.burn_duration_s)
    t.metadata["burn_duration_s"] = format_double(*curve.meta.burn_duration_s);
  if (curve.meta.B_tesla) t.metadata["B_tesla"] = format_double(*curve.meta.B_tesla);
  if (curve.meta.T_kelvin)
    t.metadata["T_kelvin"] = format_double(*curve.meta.T_kelvin);
  for (const auto& p : curve.points) {
    if (has_sigma)
      t.rows.push_back({p.t_s, p.amplitude, p.sigma});
    else
      t.rows.push_back({p.t_s, p.amplitude});
  }
  write_csv(path, t);
}

DecayCurve read_decay_curve(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  if (t.columns.size() < 2 || t.columns[0] != "t_d_s" || t.columns[1] != "amplitude")
    throw IoError(path.string() + ": expected columns t_d_s,amplitude[,sigma]");
  const bool has_sigma = t.columns.size() >= 3 && t.columns[2] == "sigma";
  DecayCurve curve;
  if (auto it = t.metadata.find("burn_duration_s"); it != t.metadata.end())
    curve.meta.burn_duration_s = std::stod(it->second);
  if (auto it = t.metadata.find("B_tesla"); it != t.metadata.end())
    curve.meta.B_tesla = std::stod(it->second);
  if (auto it = t.metadata.find("T_kelvin"); it != t.metadata.end())
    curve.meta.T_kelvin = std::stod(it->second);
  for (const auto& row : t.rows)
    curve.points.push_back({row[0], row[1], has_sigma ? row[2] : 0.0});
  if (curve.points.empty()) throw IoError(path.string() + ": no data points");
  return curve;
}

}  // namespace holeburn
