#include <doctest.h>

#include <cmath>
#include <random>

#include "holeburn/errors.hpp"
#include "holeburn/fitkit.hpp"

using namespace holeburn;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  return g;
}

std::vector<DecayCurve> synthetic_set(double T_f, double T_s,
                                      const std::vector<std::pair<double, double>>& amps,
                                      double noise_rel = 0.0,
                                      std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_rel);
  std::vector<DecayCurve> curves;
  for (const auto& [df, ds] : amps) {
    DecayCurve c;
    for (double t : log_grid(1e-3, 8.0, 30)) {
      double y = df * std::exp(-t / T_f) + ds * std::exp(-t / T_s);
      if (noise_rel > 0.0) y = std::max(0.0, y * (1.0 + noise(rng)));
      c.points.push_back({t, y, 0.0});
    }
    curves.push_back(c);
  }
  return curves;
}

// Independent brute-force oracle over a 50x50 log-spaced grid.
double grid_oracle_best(const std::vector<DecayCurve>& curves) {
  double best = std::numeric_limits<double>::infinity();
  for (double Tf : log_grid(3e-4, 24.0, 50))
    for (double Ts : log_grid(3e-4, 24.0, 50)) {
      if (Ts <= Tf) continue;
      best = std::min(best, biexp_objective(curves, Tf, Ts));
    }
  return best;
}

}  // namespace

TEST_CASE("noiseless 8-curve recovery to 1e-6 relative") {
  std::vector<std::pair<double, double>> amps;
  for (int i = 0; i < 8; ++i)
    amps.emplace_back(1.0 - 0.1 * i, 0.1 + 0.1 * i);
  const auto curves = synthetic_set(0.075, 1.72, amps);
  const BiexpFit fit = fit_biexp_global(curves);
  CHECK(fit.T_fast_s == doctest::Approx(0.075).epsilon(1e-6));
  CHECK(fit.T_slow_s == doctest::Approx(1.72).epsilon(1e-6));
  for (std::size_t i = 0; i < amps.size(); ++i) {
    CHECK(fit.amplitudes[i][0] == doctest::Approx(amps[i].first).epsilon(1e-5));
    CHECK(fit.amplitudes[i][1] == doctest::Approx(amps[i].second).epsilon(1e-5));
    CHECK(fit.fractions[i][0] + fit.fractions[i][1] == doctest::Approx(1.0));
  }
}

TEST_CASE("5% noise: constants within 10%, objective beats the grid oracle") {
  std::vector<std::pair<double, double>> amps;
  for (int i = 0; i < 8; ++i)
    amps.emplace_back(0.9 - 0.08 * i, 0.15 + 0.09 * i);
  const auto curves = synthetic_set(0.075, 1.72, amps, 0.05, 42);
  const BiexpFit fit = fit_biexp_global(curves);
  CHECK(std::abs(fit.T_fast_s - 0.075) / 0.075 < 0.10);
  CHECK(std::abs(fit.T_slow_s - 1.72) / 1.72 < 0.10);
  CHECK(fit.objective <= grid_oracle_best(curves) + 1e-12);
}

TEST_CASE("single-exponential data flags the unidentifiable slow component") {
  const auto curves = synthetic_set(0.075, 1.72, {{1.0, 0.0}, {0.7, 0.0}});
  const BiexpFit fit = fit_biexp_global(curves);
  double sum_ds = 0.0;
  for (const auto& a : fit.amplitudes) sum_ds += a[1];
  CHECK(sum_ds < 1e-6);
  bool flagged = false;
  for (const auto& f : fit.flags)
    flagged = flagged || f == "slow_component_unidentifiable";
  CHECK(flagged);
}

TEST_CASE("amplitude scale invariance") {
  std::vector<std::pair<double, double>> amps = {{0.8, 0.3}, {0.4, 0.7}};
  const auto base = synthetic_set(0.05, 1.0, amps);
  auto scaled = base;
  for (auto& c : scaled)
    for (auto& p : c.points) p.amplitude *= 7.5;
  const BiexpFit f1 = fit_biexp_global(base);
  const BiexpFit f2 = fit_biexp_global(scaled);
  CHECK(f2.T_fast_s == doctest::Approx(f1.T_fast_s).epsilon(1e-7));
  CHECK(f2.T_slow_s == doctest::Approx(f1.T_slow_s).epsilon(1e-7));
  for (std::size_t i = 0; i < amps.size(); ++i) {
    CHECK(f2.amplitudes[i][0] == doctest::Approx(7.5 * f1.amplitudes[i][0]));
    CHECK(f2.fractions[i][0] == doctest::Approx(f1.fractions[i][0]).epsilon(1e-7));
  }
}

TEST_CASE("time-unit covariance") {
  std::vector<std::pair<double, double>> amps = {{0.8, 0.3}, {0.4, 0.7}};
  const auto base = synthetic_set(0.05, 1.0, amps);
  auto rescaled = base;
  for (auto& c : rescaled)
    for (auto& p : c.points) p.t_s *= 3.0;
  const BiexpFit f1 = fit_biexp_global(base);
  const BiexpFit f2 = fit_biexp_global(rescaled);
  CHECK(f2.T_fast_s == doctest::Approx(3.0 * f1.T_fast_s).epsilon(1e-6));
  CHECK(f2.T_slow_s == doctest::Approx(3.0 * f1.T_slow_s).epsilon(1e-6));
}

TEST_CASE("ordering convention T_fast < T_slow") {
  const auto curves = synthetic_set(0.075, 1.72, {{0.5, 0.5}, {0.2, 0.8}});
  const BiexpFit fit = fit_biexp_global(curves);
  CHECK(fit.T_fast_s < fit.T_slow_s);
}

TEST_CASE("determinism") {
  const auto curves = synthetic_set(0.075, 1.72, {{0.5, 0.5}, {0.2, 0.8}}, 0.05, 9);
  const BiexpFit a = fit_biexp_global(curves);
  const BiexpFit b = fit_biexp_global(curves);
  CHECK(a.T_fast_s == b.T_fast_s);
  CHECK(a.T_slow_s == b.T_slow_s);
  CHECK(a.objective == b.objective);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(fit_biexp_global({}), ConfigError);
  DecayCurve tiny;
  tiny.points = {{0.1, 1.0, 0.0}, {0.2, 0.5, 0.0}};
  CHECK_THROWS_AS(fit_biexp_global({tiny}), ConfigError);
}

TEST_CASE("power-law fit") {
  std::vector<std::pair<double, double>> pts;
  for (double B : {0.5, 0.8, 1.2, 2.0, 3.0})
    pts.emplace_back(B, std::pow(B, -4.0));
  const PowerLawFit f = fit_power_law(pts);
  CHECK(f.exponent == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(f.exponent_sigma == doctest::Approx(0.0).epsilon(1e-8));

  pts.clear();
  for (double B : {0.5, 1.0, 2.0}) pts.emplace_back(B, 3.7);
  CHECK(fit_power_law(pts).exponent == doctest::Approx(0.0).epsilon(1e-12));

  pts = {{1.0, 1.0}, {2.0, -1.0}, {3.0, 1.0}};
  CHECK_THROWS_AS(fit_power_law(pts), ConfigError);
  pts = {{1.0, 1.0}, {2.0, 0.5}};
  CHECK_THROWS_AS(fit_power_law(pts), ConfigError);
}

TEST_CASE("bootstrap uncertainty") {
  std::vector<std::pair<double, double>> amps = {{0.8, 0.4}, {0.5, 0.6},
                                                 {0.3, 0.8}, {0.9, 0.2}};
  SUBCASE("zero noise gives ~zero sigma") {
    const auto curves = synthetic_set(0.075, 1.72, amps);
    const BootstrapResult r = bootstrap_biexp(curves, 100, 7);
    CHECK(r.T_fast_sigma < 1e-5);
    CHECK(r.T_slow_sigma < 1e-5);
  }
  SUBCASE("5% noise sigma within factor 2 of the covariance estimate") {
    const auto curves = synthetic_set(0.075, 1.72, amps, 0.05, 11);
    const BiexpFit fit = fit_biexp_global(curves);
    const BootstrapResult r = bootstrap_biexp(curves, 500, 13);
    const double cov_sigma = std::sqrt(fit.time_constant_covariance(1, 1));
    CHECK(r.T_slow_sigma > 0.0);
    CHECK(r.T_slow_sigma < 2.0 * cov_sigma + 1e-12);
    CHECK(r.T_slow_sigma > 0.5 * cov_sigma - 1e-12);
  }
  SUBCASE("deterministic given seed") {
    const auto curves = synthetic_set(0.075, 1.72, amps, 0.05, 3);
    const BootstrapResult a = bootstrap_biexp(curves, 120, 99);
    const BootstrapResult b = bootstrap_biexp(curves, 120, 99);
    CHECK(a.T_fast_sigma == b.T_fast_sigma);
    CHECK(a.T_slow_sigma == b.T_slow_sigma);
  }
  SUBCASE("too few resamples rejected") {
    const auto curves = synthetic_set(0.075, 1.72, amps);
    CHECK_THROWS_AS(bootstrap_biexp(curves, 50, 1), ConfigError);
  }
}
