#include <doctest.h>

#include <cmath>
#include <tuple>

#include "holeburn/errors.hpp"
#include "holeburn/relaxation.hpp"

using namespace holeburn;

namespace {
SpinSystem nd145() {
  SpinSystem s;
  s.nuclear_spin = 3.5;
  s.g_factor = 1.47;
  s.hyperfine_A_GHz = 0.5;
  return s;
}
}  // namespace

TEST_CASE("direct SLR: pure B^4 without coth") {
  SLRParams p;
  p.alpha_direct = 1.0;
  p.include_coth = false;
  CHECK(direct_slr_rate(p, nd145(), {2.0, 3.0}) == doctest::Approx(16.0));
  const double r1 = direct_slr_rate(p, nd145(), {0.45, 3.0});
  const double r2 = direct_slr_rate(p, nd145(), {0.9, 3.0});
  CHECK(r2 / r1 == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("direct SLR with coth thermal factor") {
  SLRParams p;
  p.alpha_direct = 1.0;
  const double r = direct_slr_rate(p, nd145(), {0.9, 3.0});
  // 0.9^4 * coth(18.52 GHz / (2 * 62.5 GHz))
  CHECK(r == doctest::Approx(4.47).epsilon(5e-3));
  CHECK_THROWS_AS(direct_slr_rate(p, nd145(), {0.0, 3.0}), NumericError);
}

TEST_CASE("total SLR rate components") {
  SLRParams p;
  CHECK(total_slr_rate(p, nd145(), {0.9, 3.0}) == 0.0);
  p.alpha_raman = 1.0;
  CHECK(total_slr_rate(p, nd145(), {0.9, 2.0}) == doctest::Approx(512.0));
  p.alpha_raman = 0.0;
  p.alpha_orbach = 1.0;
  p.orbach_gap_K = 3.0;
  CHECK(total_slr_rate(p, nd145(), {0.9, 3.0}) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("flip-flop rescaling") {
  FlipFlopParams p;
  p.base_rate = 12.5;
  p.concentration_ppm = 30.0;
  p.reference_concentration_ppm = 30.0;
  p.nuclear_dilution = 1.0;
  CHECK(flipflop_rate(p, {0.2, 3.0}).rate == doctest::Approx(12.5));

  // the x24 reduction: concentration 10 vs 30 ppm, dilution 8
  p.concentration_ppm = 10.0;
  p.nuclear_dilution = 8.0;
  CHECK(flipflop_rate(p, {0.2, 3.0}).rate == doctest::Approx(12.5 / 24.0));
}

TEST_CASE("flip-flop linear in concentration, inverse in dilution") {
  FlipFlopParams p;
  p.base_rate = 5.0;
  const double base = flipflop_rate(p, {0.2, 3.0}).rate;
  p.concentration_ppm *= 3.0;
  CHECK(flipflop_rate(p, {0.2, 3.0}).rate == doctest::Approx(3.0 * base));
  p.nuclear_dilution *= 2.0;
  CHECK(flipflop_rate(p, {0.2, 3.0}).rate == doctest::Approx(1.5 * base));
}

TEST_CASE("flip-flop tabulated field profile with extrapolation flag") {
  FlipFlopParams p;
  p.concentration_ppm = 30.0;
  p.nuclear_dilution = 1.0;
  p.field_profile = {{0.1, 10.0}, {0.2, 5.0}, {0.4, 1.0}};
  p.validity_Bmax_tesla = 0.5;
  CHECK(flipflop_rate(p, {0.1, 3.0}).rate == doctest::Approx(10.0));
  CHECK(flipflop_rate(p, {0.4, 3.0}).rate == doctest::Approx(1.0));
  CHECK_FALSE(flipflop_rate(p, {0.2, 3.0}).extrapolated);
  CHECK(flipflop_rate(p, {0.05, 3.0}).extrapolated);
  CHECK(flipflop_rate(p, {0.8, 3.0}).extrapolated);
  // log-linear interior interpolation stays within the bracket
  const double mid = flipflop_rate(p, {0.3, 3.0}).rate;
  CHECK(mid > 1.0);
  CHECK(mid < 5.0);
}

TEST_CASE("nuclear flip rates") {
  auto [rp, rm] = nuclear_flip_rates(13.3, 18.52, 18.52);
  CHECK(rp == doctest::Approx(13.3));
  CHECK(rm == doctest::Approx(13.3));
  std::tie(rp, rm) = nuclear_flip_rates(13.3, 0.0, 18.52);
  CHECK(rp == 0.0);
  CHECK(rm == 0.0);
  std::tie(rp, rm) = nuclear_flip_rates(13.3, 0.5, 18.52);
  CHECK(rp == doctest::Approx(9.72e-3).epsilon(1e-3));
  CHECK_THROWS_AS(nuclear_flip_rates(13.3, 0.5, 0.0), NumericError);
}

TEST_CASE("predicted lifetimes: calibration identity and additivity") {
  FieldScanModel m;
  m.sys = nd145();
  m.slr.include_coth = false;
  // choose alpha so T_fast(0.9 T) = 75 ms
  m.slr.alpha_direct = (1.0 / 0.075) / std::pow(0.9, 4.0);
  const Lifetimes lt = predict_lifetimes(m, {0.9, 3.0});
  CHECK(lt.T_fast_s == doctest::Approx(0.075).epsilon(1e-12));
  CHECK(lt.T_slow_s > lt.T_fast_s);

  // adding a channel never increases a lifetime
  FieldScanModel m2 = m;
  m2.ff.base_rate = 2.0;
  m2.ff.concentration_ppm = 30.0;
  m2.ff.nuclear_dilution = 1.0;
  const Lifetimes lt2 = predict_lifetimes(m2, {0.9, 3.0});
  CHECK(lt2.T_fast_s < lt.T_fast_s);
  CHECK(lt2.T_slow_s < lt.T_slow_s);
}

TEST_CASE("T_slow/T_fast suppression grows as B^2") {
  FieldScanModel m;
  m.sys = nd145();
  m.slr.include_coth = false;
  m.slr.alpha_direct = 100.0;
  for (double B : {0.5, 0.8, 1.2}) {
    const Lifetimes a = predict_lifetimes(m, {B, 3.0});
    const Lifetimes b = predict_lifetimes(m, {2.0 * B, 3.0});
    const double ratio_a = a.T_slow_s / a.T_fast_s;
    const double ratio_b = b.T_slow_s / b.T_fast_s;
    CHECK(ratio_b / ratio_a == doctest::Approx(4.0).epsilon(1e-9));
  }
}

TEST_CASE("high-field direct-dominated T_fast scales as 1/16 on doubling") {
  FieldScanModel m;
  m.sys = nd145();
  m.slr.include_coth = false;
  m.slr.alpha_direct = 10.0;
  const Lifetimes a = predict_lifetimes(m, {1.0, 3.0});
  const Lifetimes b = predict_lifetimes(m, {2.0, 3.0});
  CHECK(a.T_fast_s / b.T_fast_s == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("parameter validation") {
  SLRParams p;
  p.alpha_direct = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.alpha_orbach = 1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);  // missing gap
  FlipFlopParams f;
  f.concentration_ppm = 0.0;
  CHECK_THROWS_AS(f.validate(), ConfigError);
}
