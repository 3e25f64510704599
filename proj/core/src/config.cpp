#include "holeburn/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "holeburn/errors.hpp"

namespace holeburn {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& context) {
  if (!obj.is_object())
    throw ConfigError(context + ": expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key))
      throw ConfigError(context + ": unknown key '" + key + "'");
}

double require_number(const json& obj, const std::string& key,
                      const std::string& context) {
  if (!obj.contains(key))
    throw ConfigError(context + ": missing required key '" + key + "'");
  if (!obj.at(key).is_number())
    throw ConfigError(context + "." + key + ": expected a number");
  return obj.at(key).get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback) {
  return obj.contains(key) ? obj.at(key).get<double>() : fallback;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream ss;
  ss << std::hex << h;
  return ss.str();
}

SpinSystem parse_material(const json& j) {
  check_keys(j,
             {"g_factor", "hyperfine_A_MHz", "nuclear_spin",
              "optical_lifetime_us", "isotopic_purity"},
             "material");
  SpinSystem sys;
  sys.g_factor = require_number(j, "g_factor", "material");
  sys.hyperfine_A_GHz = require_number(j, "hyperfine_A_MHz", "material") / 1e3;
  sys.nuclear_spin = require_number(j, "nuclear_spin", "material");
  sys.optical_lifetime_s =
      number_or(j, "optical_lifetime_us", 225.0) * 1e-6;
  sys.isotopic_purity = number_or(j, "isotopic_purity", 1.0);
  sys.validate();
  return sys;
}

FieldPoint parse_field(const json& j) {
  check_keys(j, {"B_tesla", "T_kelvin"}, "field");
  FieldPoint fp;
  fp.B_tesla = require_number(j, "B_tesla", "field");
  fp.T_kelvin = require_number(j, "T_kelvin", "field");
  fp.validate();
  return fp;
}

RatesConfig parse_rates(const json& j) {
  check_keys(j, {"R0_per_s", "R_plus_per_s", "R_minus_per_s"}, "rates");
  RatesConfig r;
  r.R0 = require_number(j, "R0_per_s", "rates");
  if (j.contains("R_plus_per_s")) r.R_plus = j.at("R_plus_per_s").get<double>();
  if (j.contains("R_minus_per_s")) r.R_minus = j.at("R_minus_per_s").get<double>();
  return r;
}

SLRParams parse_slr(const json& j) {
  check_keys(j,
             {"alpha_direct", "alpha_raman", "alpha_orbach", "orbach_gap_K",
              "include_coth"},
             "slr");
  SLRParams p;
  p.alpha_direct = number_or(j, "alpha_direct", 0.0);
  p.alpha_raman = number_or(j, "alpha_raman", 0.0);
  p.alpha_orbach = number_or(j, "alpha_orbach", 0.0);
  p.orbach_gap_K = number_or(j, "orbach_gap_K", 0.0);
  if (j.contains("include_coth")) p.include_coth = j.at("include_coth").get<bool>();
  p.validate();
  return p;
}

FlipFlopParams parse_flipflop(const json& j) {
  check_keys(j,
             {"base_rate_per_s", "concentration_ppm",
              "reference_concentration_ppm", "nuclear_dilution",
              "field_profile", "validity_Bmax_tesla"},
             "flipflop");
  FlipFlopParams p;
  p.base_rate = number_or(j, "base_rate_per_s", 0.0);
  p.concentration_ppm = number_or(j, "concentration_ppm", 10.0);
  p.reference_concentration_ppm =
      number_or(j, "reference_concentration_ppm", 30.0);
  p.nuclear_dilution = number_or(j, "nuclear_dilution", 8.0);
  p.validity_Bmax_tesla = number_or(j, "validity_Bmax_tesla", 0.5);
  if (j.contains("field_profile")) {
    for (const auto& entry : j.at("field_profile")) {
      if (!entry.is_array() || entry.size() != 2)
        throw ConfigError("flipflop.field_profile: expected [B_tesla, rate] pairs");
      p.field_profile.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  p.validate();
  return p;
}

DelayGridConfig parse_delays(const json& j) {
  DelayGridConfig d;
  if (j.is_array()) {
    for (const auto& v : j) d.explicit_delays_s.push_back(v.get<double>());
    return d;
  }
  check_keys(j, {"min_s", "max_s", "points", "log_spacing"}, "pump.delays");
  d.min_s = require_number(j, "min_s", "pump.delays");
  d.max_s = require_number(j, "max_s", "pump.delays");
  d.points = int(require_number(j, "points", "pump.delays"));
  if (j.contains("log_spacing")) d.log_spacing = j.at("log_spacing").get<bool>();
  return d;
}

PumpConfig parse_pump(const json& j) {
  check_keys(j,
             {"pump_rate_per_s", "branching_epsilon", "pumped_m_I",
              "burn_durations_s", "delays", "noise"},
             "pump");
  PumpConfig p;
  p.pump_rate = require_number(j, "pump_rate_per_s", "pump");
  p.branching_epsilon = require_number(j, "branching_epsilon", "pump");
  p.pumped_m_I = require_number(j, "pumped_m_I", "pump");
  if (!j.contains("burn_durations_s"))
    throw ConfigError("pump: missing required key 'burn_durations_s'");
  for (const auto& v : j.at("burn_durations_s"))
    p.burn_durations_s.push_back(v.get<double>());
  if (!j.contains("delays"))
    throw ConfigError("pump: missing required key 'delays'");
  p.delays = parse_delays(j.at("delays"));
  if (j.contains("noise")) {
    check_keys(j.at("noise"), {"sigma_rel"}, "pump.noise");
    NoiseConfig n;
    n.sigma_rel = require_number(j.at("noise"), "sigma_rel", "pump.noise");
    p.noise = n;
  }
  return p;
}

AfcConfig parse_afc(const json& j) {
  check_keys(j,
             {"d", "d0_ratio", "finesse", "delta_hz", "bandwidth_hz",
              "band_d0_ratios", "d_min", "d_max", "d_points"},
             "afc");
  AfcConfig a;
  a.d = require_number(j, "d", "afc");
  a.d0_ratio = require_number(j, "d0_ratio", "afc");
  if (j.contains("finesse")) a.finesse = j.at("finesse").get<double>();
  a.delta_hz = number_or(j, "delta_hz", 0.0);
  a.bandwidth_hz = number_or(j, "bandwidth_hz", 0.0);
  if (j.contains("band_d0_ratios"))
    for (const auto& v : j.at("band_d0_ratios"))
      a.band_d0_ratios.push_back(v.get<double>());
  a.d_min = number_or(j, "d_min", 0.1);
  a.d_max = number_or(j, "d_max", 50.0);
  a.d_points = int(number_or(j, "d_points", 200));
  return a;
}

FieldScanConfig parse_field_scan(const json& j) {
  check_keys(j,
             {"B_min_tesla", "B_max_tesla", "points", "powerlaw_B_min",
              "powerlaw_B_max"},
             "field_scan");
  FieldScanConfig f;
  f.B_min_tesla = number_or(j, "B_min_tesla", 0.01);
  f.B_max_tesla = number_or(j, "B_max_tesla", 1.6);
  f.points = int(number_or(j, "points", 100));
  if (j.contains("powerlaw_B_min")) f.powerlaw_B_min = j.at("powerlaw_B_min").get<double>();
  if (j.contains("powerlaw_B_max")) f.powerlaw_B_max = j.at("powerlaw_B_max").get<double>();
  if (f.B_min_tesla <= 0.0 || f.B_max_tesla <= f.B_min_tesla || f.points < 2)
    throw ConfigError("field_scan: need 0 < B_min < B_max and >= 2 points");
  return f;
}

HoleFeatureConfig parse_hole(const json& j, const std::string& context) {
  check_keys(j, {"center_hz", "depth", "width_hz", "shape"}, context);
  HoleFeatureConfig h;
  h.center_hz = number_or(j, "center_hz", 0.0);
  h.depth = require_number(j, "depth", context);
  h.width_hz = require_number(j, "width_hz", context);
  if (j.contains("shape")) {
    h.shape = j.at("shape").get<std::string>();
    if (h.shape != "lorentzian" && h.shape != "gaussian")
      throw ConfigError(context + ".shape: expected 'lorentzian' or 'gaussian'");
  }
  return h;
}

SpectrumConfig parse_spectrum(const json& j) {
  check_keys(j,
             {"peak_d", "fwhm_GHz", "span_GHz", "points", "length_cm",
              "apply_zeeman_split", "hole", "side_holes", "embed_comb"},
             "spectrum");
  SpectrumConfig s;
  s.peak_d = require_number(j, "peak_d", "spectrum");
  s.fwhm_hz = require_number(j, "fwhm_GHz", "spectrum") * 1e9;
  s.span_hz = number_or(j, "span_GHz", 40.0) * 1e9;
  s.points = int(number_or(j, "points", 2001));
  s.length_cm = number_or(j, "length_cm", 1.2);
  if (j.contains("apply_zeeman_split"))
    s.apply_zeeman_split = j.at("apply_zeeman_split").get<bool>();
  if (j.contains("hole")) s.hole = parse_hole(j.at("hole"), "spectrum.hole");
  if (j.contains("side_holes"))
    for (const auto& sh : j.at("side_holes"))
      s.side_holes.push_back(parse_hole(sh, "spectrum.side_holes[]"));
  if (j.contains("embed_comb")) s.embed_comb = j.at("embed_comb").get<bool>();
  return s;
}

}  // namespace

GroundRates RatesConfig::resolve(const SpinSystem& sys, const FieldPoint& fp) const {
  GroundRates r;
  r.R0 = R0;
  if (R_plus && R_minus) {
    r.R_plus = *R_plus;
    r.R_minus = *R_minus;
  } else {
    const double dEg = zeeman_splitting_GHz(sys.g_factor, fp.B_tesla);
    const auto [rp, rm] = nuclear_flip_rates(R0, sys.hyperfine_A_GHz, dEg);
    r.R_plus = R_plus.value_or(rp);
    r.R_minus = R_minus.value_or(rm);
  }
  return r;
}

std::vector<double> DelayGridConfig::build() const {
  if (!explicit_delays_s.empty()) return explicit_delays_s;
  if (points < 2 || min_s <= 0.0 || max_s <= min_s)
    throw ConfigError("delay grid: need 0 < min_s < max_s and >= 2 points");
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) {
    const double f = double(i) / (points - 1);
    out[i] = log_spacing ? min_s * std::pow(max_s / min_s, f)
                         : min_s + f * (max_s - min_s);
  }
  return out;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string raw = buf.str();

  json j;
  try {
    j = json::parse(raw);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }

  check_keys(j,
             {"material", "field", "rates", "slr", "flipflop", "pump", "afc",
              "field_scan", "spectrum", "seed"},
             "scenario");
  if (!j.contains("material"))
    throw ConfigError("scenario: missing required section 'material'");
  if (!j.contains("field"))
    throw ConfigError("scenario: missing required section 'field'");

  Scenario sc;
  sc.material = parse_material(j.at("material"));
  sc.field = parse_field(j.at("field"));
  if (j.contains("rates")) sc.rates = parse_rates(j.at("rates"));
  if (j.contains("slr")) sc.slr = parse_slr(j.at("slr"));
  if (j.contains("flipflop")) sc.flipflop = parse_flipflop(j.at("flipflop"));
  if (j.contains("pump")) sc.pump = parse_pump(j.at("pump"));
  if (j.contains("afc")) sc.afc = parse_afc(j.at("afc"));
  if (j.contains("field_scan")) sc.field_scan = parse_field_scan(j.at("field_scan"));
  if (j.contains("spectrum")) sc.spectrum = parse_spectrum(j.at("spectrum"));
  if (j.contains("seed")) sc.seed = j.at("seed").get<std::uint64_t>();
  sc.config_hash = fnv1a_hex(raw);
  return sc;
}

}  // namespace holeburn
