#include <doctest.h>

#include <cmath>
#include <numbers>

#include "holeburn/afc.hpp"
#include "holeburn/errors.hpp"

using namespace holeburn;

namespace {
CombSpec spec_at(double d, double d0_ratio, double F) {
  CombSpec s;
  s.d = d;
  s.d0 = d0_ratio * d;
  s.finesse = F;
  return s;
}
}  // namespace

TEST_CASE("efficiency at the measured operating point") {
  const auto r = afc_efficiency(spec_at(4.7, 0.013, optimal_finesse(4.7)));
  CHECK(r.eta == doctest::Approx(0.336).epsilon(0.01));
  CHECK(r.eta > 0.315);
  CHECK(r.eta < 0.345);
}

TEST_CASE("efficiency limits") {
  // opaque background kills the echo
  CombSpec s = spec_at(4.7, 0.0, 3.0);
  s.d0 = 4.7;  // d0 = d, heavy background
  const double eta_bg = afc_efficiency(s).eta;
  CHECK(eta_bg < 0.01 * afc_efficiency(spec_at(4.7, 0.0, 3.0)).eta + 0.02);

  // F -> infinity starves the absorption
  CHECK(afc_efficiency(spec_at(4.7, 0.0, 1e6)).eta < 1e-9);
}

TEST_CASE("efficiency factorizes exactly") {
  for (double d : {0.5, 2.0, 4.7, 12.0})
    for (double F : {1.5, 2.0, 3.384, 10.0}) {
      const auto r = afc_efficiency(spec_at(d, 0.013, F));
      CHECK(r.eta == doctest::Approx(r.factor_absorption * r.factor_dephasing *
                                     r.factor_background)
                         .epsilon(1e-12));
      CHECK(r.factor_absorption <= 1.0);
      CHECK(r.factor_dephasing <= 1.0);
      CHECK(r.factor_background <= 1.0);
    }
}

TEST_CASE("sinc convention: eta_deph(F=2) = (2/pi)^2") {
  const auto r = afc_efficiency(spec_at(4.7, 0.0, 2.0));
  const double expected = std::pow(2.0 / std::numbers::pi, 2.0);
  CHECK(r.factor_dephasing == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("optimal finesse closed form") {
  CHECK(optimal_finesse(2.0 * std::numbers::pi) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(optimal_finesse(4.7) == doctest::Approx(3.384).epsilon(1e-3));
  CHECK(optimal_finesse(10.0) > optimal_finesse(4.7));
  CHECK_THROWS_AS(optimal_finesse(0.0), ConfigError);
  CHECK_THROWS_AS(optimal_finesse(-1.0), ConfigError);
}

TEST_CASE("optimal finesse is a local maximum of the efficiency") {
  for (double d : {0.5, 1.0, 4.7, 12.0, 50.0}) {
    const double F = optimal_finesse(d);
    const double eta = afc_efficiency(spec_at(d, 0.0, F)).eta;
    CHECK(eta >= afc_efficiency(spec_at(d, 0.0, F * 1.01)).eta);
    CHECK(eta >= afc_efficiency(spec_at(d, 0.0, F * 0.99)).eta);
  }
}

TEST_CASE("max efficiency against dense-grid oracle") {
  for (double ratio : {0.0, 0.013, 0.07}) {
    const auto m = max_efficiency(ratio);
    double oracle = 0.0;
    for (int i = 0; i <= 20000; ++i) {
      const double d = 0.1 + (50.0 - 0.1) * double(i) / 20000.0;
      CombSpec s = spec_at(d, ratio, optimal_finesse(d));
      oracle = std::max(oracle, afc_efficiency(s).eta);
    }
    CHECK(m.eta_star == doctest::Approx(oracle).epsilon(1e-5));
  }
  CHECK(max_efficiency(0.013).eta_star == doctest::Approx(0.43).epsilon(0.025));
  CHECK(max_efficiency(0.07).eta_star == doctest::Approx(0.26).epsilon(0.04));
  CHECK(max_efficiency(0.0).eta_star == doctest::Approx(0.54).epsilon(0.02));
  CHECK_THROWS_AS(max_efficiency(0.013, 5.0, 5.0), ConfigError);
}

TEST_CASE("efficiency curve ordering and unimodality") {
  std::vector<double> grid;
  for (int i = 1; i <= 100; ++i) grid.push_back(0.3 * i);
  const auto c0 = efficiency_curve(0.0, grid);
  const auto c13 = efficiency_curve(0.013, grid);
  const auto c70 = efficiency_curve(0.07, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(c0[i].eta >= c13[i].eta);
    CHECK(c13[i].eta >= c70[i].eta);
  }
  // rises then falls for d0_ratio > 0
  bool falling = false;
  for (std::size_t i = 1; i < c13.size(); ++i) {
    if (c13[i].eta < c13[i - 1].eta) falling = true;
    if (falling) CHECK(c13[i].eta <= c13[i - 1].eta + 1e-12);
  }
  // the d=4.7 point of the 1.3% curve
  const auto pt = efficiency_curve(0.013, {4.7});
  CHECK(pt[0].eta == doctest::Approx(0.336).epsilon(0.01));
}

TEST_CASE("uncertainty band brackets the central curve") {
  std::vector<double> grid;
  for (int i = 1; i <= 50; ++i) grid.push_back(0.5 * i);
  const auto lo = efficiency_curve(0.004, grid);
  const auto mid = efficiency_curve(0.013, grid);
  const auto hi = efficiency_curve(0.022, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(lo[i].eta >= mid[i].eta);
    CHECK(mid[i].eta >= hi[i].eta);
  }
}

TEST_CASE("comb profile geometry") {
  CombSpec s = spec_at(4.7, 0.013, 2.0);
  s.delta_hz = 1e6;
  std::vector<double> grid;
  const int per_period = 40;
  for (int i = 0; i < 10 * per_period; ++i)
    grid.push_back((i + 0.5) * s.delta_hz / per_period);
  const auto od = comb_profile(s, grid);
  int in_tooth = 0;
  for (double v : od) in_tooth += (v > s.d0 + 1e-12);
  CHECK(in_tooth == 5 * per_period);  // duty cycle 1/2

  // midpoint-sampled mean over whole periods matches the analytic identity
  double mean = 0.0;
  for (double v : od) mean += v;
  mean /= double(od.size());
  CHECK(mean == doctest::Approx(s.mean_depth()).epsilon(1e-12));
  CHECK(s.mean_depth() == doctest::Approx(s.d0 + s.d / s.finesse).epsilon(1e-15));

  CHECK(s.echo_delay_s() == doctest::Approx(1e-6).epsilon(1e-12));
  CHECK_THROWS_AS(comb_profile(s, std::vector<double>{0.0, 0.5e6}), ConfigError);
}

TEST_CASE("comb spec validation") {
  CHECK_THROWS_AS(afc_efficiency(spec_at(4.7, 0.0, 1.0)), ConfigError);
  CHECK_THROWS_AS(afc_efficiency(spec_at(-1.0, 0.0, 2.0)), ConfigError);
  CombSpec s = spec_at(1.0, 0.0, 2.0);
  s.d0 = 2.0;  // d0 > d
  CHECK_THROWS_AS(afc_efficiency(s), ConfigError);
}
