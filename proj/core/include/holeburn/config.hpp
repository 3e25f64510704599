#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "holeburn/levels.hpp"
#include "holeburn/pumpdyn.hpp"
#include "holeburn/relaxation.hpp"

namespace holeburn {

// Ground-network rates for the pump simulation. R+/R- default to the
// perturbative suppression of R0 computed from the material and field.
struct RatesConfig {
  double R0 = 0.0;
  std::optional<double> R_plus;
  std::optional<double> R_minus;

  GroundRates resolve(const SpinSystem& sys, const FieldPoint& fp) const;
};

struct DelayGridConfig {
  std::vector<double> explicit_delays_s;  // used when non-empty
  double min_s = 0.0;
  double max_s = 0.0;
  int points = 0;
  bool log_spacing = true;

  std::vector<double> build() const;
};

struct NoiseConfig {
  double sigma_rel = 0.0;  // multiplicative, 1-sigma
};

struct PumpConfig {
  double pump_rate = 0.0;
  double branching_epsilon = 0.0;
  double pumped_m_I = 0.0;  // pumped level is (m_S = -1/2, this m_I)
  std::vector<double> burn_durations_s;
  DelayGridConfig delays;
  std::optional<NoiseConfig> noise;
};

struct AfcConfig {
  double d = 0.0;
  double d0_ratio = 0.0;
  std::optional<double> finesse;  // absent -> optimal_finesse(d)
  double delta_hz = 0.0;
  double bandwidth_hz = 0.0;
  std::vector<double> band_d0_ratios;  // uncertainty band for the curve command
  double d_min = 0.1;
  double d_max = 50.0;
  int d_points = 200;
};

struct FieldScanConfig {
  double B_min_tesla = 0.01;
  double B_max_tesla = 1.6;
  int points = 100;
  std::optional<double> powerlaw_B_min;  // high-field fit window
  std::optional<double> powerlaw_B_max;
};

struct HoleFeatureConfig {
  double center_hz = 0.0;
  double depth = 0.0;
  double width_hz = 0.0;
  std::string shape = "lorentzian";
};

struct SpectrumConfig {
  double peak_d = 0.0;
  double fwhm_hz = 0.0;
  double span_hz = 0.0;
  int points = 2001;
  double length_cm = 1.2;
  bool apply_zeeman_split = false;
  std::optional<HoleFeatureConfig> hole;
  std::vector<HoleFeatureConfig> side_holes;
  bool embed_comb = false;
};

struct Scenario {
  SpinSystem material;
  FieldPoint field;
  std::optional<RatesConfig> rates;
  std::optional<SLRParams> slr;
  std::optional<FlipFlopParams> flipflop;
  std::optional<PumpConfig> pump;
  std::optional<AfcConfig> afc;
  std::optional<FieldScanConfig> field_scan;
  std::optional<SpectrumConfig> spectrum;
  std::uint64_t seed = 0;

  // FNV-1a of the raw config bytes; recorded in output manifests.
  std::string config_hash;
};

// Strict-schema load: unknown keys anywhere are rejected with a path-qualified
// diagnostic. Throws ConfigError / IoError.
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace holeburn
