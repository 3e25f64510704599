#include "holeburn/relaxation.hpp"

#include <algorithm>
#include <cmath>

#include "holeburn/errors.hpp"

namespace holeburn {

void SLRParams::validate() const {
  if (alpha_direct < 0.0 || alpha_raman < 0.0 || alpha_orbach < 0.0)
    throw ConfigError("SLR coefficients must be >= 0");
  if (alpha_orbach > 0.0 && orbach_gap_K <= 0.0)
    throw ConfigError("orbach_gap must be > 0 when alpha_orbach > 0");
}

void FlipFlopParams::validate() const {
  if (base_rate < 0.0) throw ConfigError("flip-flop base_rate must be >= 0");
  if (concentration_ppm <= 0.0 || reference_concentration_ppm <= 0.0)
    throw ConfigError("concentrations must be > 0");
  if (nuclear_dilution <= 0.0) throw ConfigError("nuclear_dilution must be > 0");
  for (const auto& [B, r] : field_profile)
    if (B <= 0.0 || r < 0.0)
      throw ConfigError("field_profile entries must have B > 0 and rate >= 0");
}

double FlipFlopParams::scaling() const {
  return (concentration_ppm / reference_concentration_ppm) / nuclear_dilution;
}

double direct_slr_rate(const SLRParams& p, const SpinSystem& sys,
                       const FieldPoint& fp) {
  p.validate();
  const double B = fp.B_tesla;
  const double b4 = p.alpha_direct * B * B * B * B;
  if (!p.include_coth) return b4;
  if (B <= 0.0)
    throw NumericError("coth divergence at zero splitting (B = 0)");
  const double x = zeeman_splitting_GHz(sys.g_factor, B) /
                   (2.0 * fp.thermal_energy_GHz());
  return b4 / std::tanh(x);
}

double total_slr_rate(const SLRParams& p, const SpinSystem& sys,
                      const FieldPoint& fp) {
  double rate = p.alpha_direct > 0.0 ? direct_slr_rate(p, sys, fp) : 0.0;
  rate += p.alpha_raman * std::pow(fp.T_kelvin, 9.0);
  if (p.alpha_orbach > 0.0)
    rate += p.alpha_orbach * std::exp(-p.orbach_gap_K / fp.T_kelvin);
  return rate;
}

FlipFlopRate flipflop_rate(const FlipFlopParams& p, const FieldPoint& fp) {
  p.validate();
  FlipFlopRate out;
  double base = p.base_rate;
  if (!p.field_profile.empty()) {
    std::vector<std::pair<double, double>> tab = p.field_profile;
    std::sort(tab.begin(), tab.end());
    const double B = fp.B_tesla;
    if (B <= tab.front().first) {
      base = tab.front().second;
      out.extrapolated = B < tab.front().first;
    } else if (B >= tab.back().first) {
      base = tab.back().second;
      out.extrapolated = B > tab.back().first;
    } else {
      auto hi = std::upper_bound(tab.begin(), tab.end(),
                                 std::make_pair(B, 0.0));
      auto lo = hi - 1;
      const double f = (B - lo->first) / (hi->first - lo->first);
      // log-linear when both endpoints are positive
      if (lo->second > 0.0 && hi->second > 0.0)
        base = std::exp((1.0 - f) * std::log(lo->second) +
                        f * std::log(hi->second));
      else
        base = (1.0 - f) * lo->second + f * hi->second;
    }
  }
  if (fp.B_tesla > p.validity_Bmax_tesla) out.extrapolated = true;
  out.rate = base * p.scaling();
  return out;
}

std::pair<double, double> nuclear_flip_rates(double R0, double A_GHz,
                                             double delta_Eg_GHz) {
  const double m = mixing_ratio(A_GHz, delta_Eg_GHz);
  const double r = std::min(m, 1.0) * R0;
  return {r, r};
}

Lifetimes predict_lifetimes(const FieldScanModel& m, const FieldPoint& fp) {
  fp.validate();
  Lifetimes out;
  out.slr_rate = total_slr_rate(m.slr, m.sys, fp);
  const FlipFlopRate ff = flipflop_rate(m.ff, fp);
  out.flipflop_rate = ff.rate;
  out.extrapolated = ff.extrapolated;

  const double R0 = out.slr_rate + out.flipflop_rate;
  if (R0 <= 0.0) throw NumericError("all relaxation channels are zero");
  const double dEg = zeeman_splitting_GHz(m.sys.g_factor, fp.B_tesla);
  const auto [Rp, Rm] = nuclear_flip_rates(R0, m.sys.hyperfine_A_GHz, dEg);
  out.T_fast_s = 1.0 / R0;
  out.T_slow_s = 1.0 / Rp;
  return out;
}

}  // namespace holeburn
