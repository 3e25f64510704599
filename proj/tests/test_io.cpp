#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "holeburn/csvio.hpp"
#include "holeburn/errors.hpp"

using namespace holeburn;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("holeburn_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

}  // namespace

TEST_CASE("format_double round-trips doubles exactly") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-12, 12);
  for (int i = 0; i < 200; ++i) {
    const double x = mant(rng) * std::pow(10.0, expo(rng));
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.5) == "1.5");
}

TEST_CASE("csv round-trip preserves columns, rows, and metadata") {
  TempDir tmp;
  CsvTable table;
  table.columns = {"a", "b", "c"};
  table.metadata["seed"] = "42";
  table.metadata["label"] = "scan";
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 40; ++i)
    table.rows.push_back({u(rng), u(rng), u(rng)});

  const fs::path file = tmp.path / "table.csv";
  write_csv(file, table);
  const CsvTable back = read_csv(file);

  CHECK(back.columns == table.columns);
  CHECK(back.metadata == table.metadata);
  REQUIRE(back.rows.size() == table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(back.rows[i][j] == table.rows[i][j]);
}

TEST_CASE("csv writes are byte-deterministic") {
  TempDir tmp;
  CsvTable table;
  table.columns = {"x", "y"};
  table.rows = {{0.1, 0.2}, {1e-9, 3.14159265358979}};
  write_csv(tmp.path / "a.csv", table);
  write_csv(tmp.path / "b.csv", table);

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  CHECK(slurp(tmp.path / "a.csv") == slurp(tmp.path / "b.csv"));
}

TEST_CASE("decay curve round-trip keeps points and metadata") {
  TempDir tmp;
  DecayCurve curve;
  curve.meta.burn_duration_s = 0.05;
  curve.meta.B_tesla = 0.37;
  curve.meta.T_kelvin = 3.0;
  for (int i = 0; i < 25; ++i) {
    const double t = 1e-3 * std::pow(1.4, i);
    curve.points.push_back({t, std::exp(-t / 0.075), 0.01});
  }

  const fs::path file = tmp.path / "decay.csv";
  write_decay_curve(file, curve);
  const DecayCurve back = read_decay_curve(file);

  REQUIRE(back.points.size() == curve.points.size());
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    CHECK(back.points[i].t_s == curve.points[i].t_s);
    CHECK(back.points[i].amplitude == curve.points[i].amplitude);
    CHECK(back.points[i].sigma == curve.points[i].sigma);
  }
  REQUIRE(back.meta.burn_duration_s.has_value());
  CHECK(*back.meta.burn_duration_s == 0.05);
  REQUIRE(back.meta.B_tesla.has_value());
  CHECK(*back.meta.B_tesla == 0.37);
  REQUIRE(back.meta.T_kelvin.has_value());
  CHECK(*back.meta.T_kelvin == 3.0);
}

TEST_CASE("decay curve without sigma column reads sigma as zero") {
  TempDir tmp;
  const fs::path file = tmp.path / "nosigma.csv";
  {
    std::ofstream out(file);
    out << "t_d_s,amplitude\n0.001,0.9\n0.01,0.5\n";
  }
  const DecayCurve back = read_decay_curve(file);
  REQUIRE(back.points.size() == 2);
  CHECK(back.points[0].sigma == 0.0);
  CHECK(back.points[1].amplitude == 0.5);
  CHECK_FALSE(back.meta.burn_duration_s.has_value());
}

TEST_CASE("missing file raises an io error") {
  CHECK_THROWS_AS(read_csv("/nonexistent/definitely/absent.csv"), IoError);
  CHECK_THROWS_AS(read_decay_curve("/nonexistent/absent.csv"), IoError);
}

TEST_CASE("empty and malformed files raise io errors with line numbers") {
  TempDir tmp;
  const fs::path empty = tmp.path / "empty.csv";
  std::ofstream(empty).flush();
  CHECK_THROWS_AS(read_csv(empty), IoError);

  const fs::path bad_number = tmp.path / "bad.csv";
  {
    std::ofstream out(bad_number);
    out << "x,y\n1.0,2.0\n3.0,oops\n";
  }
  try {
    read_csv(bad_number);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }

  const fs::path ragged = tmp.path / "ragged.csv";
  {
    std::ofstream out(ragged);
    out << "x,y\n1.0,2.0\n3.0\n";
  }
  CHECK_THROWS_AS(read_csv(ragged), IoError);
}

TEST_CASE("decay curve reader rejects wrong headers and bad time order") {
  TempDir tmp;
  const fs::path wrong = tmp.path / "wrong.csv";
  {
    std::ofstream out(wrong);
    out << "time,height\n0.1,0.5\n";
  }
  CHECK_THROWS_AS(read_decay_curve(wrong), IoError);
}
