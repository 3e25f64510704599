#include "holeburn/levels.hpp"

#include <algorithm>
#include <cmath>

#include "holeburn/errors.hpp"

namespace holeburn {

namespace {
bool is_half_integer_multiple(double x) {
  const double twice = 2.0 * x;
  return std::abs(twice - std::round(twice)) < 1e-9;
}
}  // namespace

void SpinSystem::validate() const {
  if (std::abs(electron_spin - 0.5) > 1e-12)
    throw ConfigError("electron_spin must be 1/2 (Kramers doublet)");
  if (nuclear_spin < 0.0 || !is_half_integer_multiple(nuclear_spin))
    throw ConfigError("nuclear_spin must be a non-negative multiple of 1/2");
  if (optical_lifetime_s <= 0.0)
    throw ConfigError("optical_lifetime must be positive");
  if (isotopic_purity < 0.0 || isotopic_purity > 1.0)
    throw ConfigError("isotopic_purity must lie in [0, 1]");
}

int SpinSystem::ground_level_count() const {
  return static_cast<int>(std::lround((2.0 * electron_spin + 1.0) *
                                      (2.0 * nuclear_spin + 1.0)));
}

void FieldPoint::validate() const {
  if (B_tesla < 0.0) throw ConfigError("magnetic field must be >= 0");
  if (T_kelvin <= 0.0) throw ConfigError("temperature must be > 0");
}

std::vector<HyperfineLevel> enumerate_levels(const SpinSystem& sys,
                                             const FieldPoint& fp) {
  sys.validate();
  fp.validate();

  const int n_mI = static_cast<int>(std::lround(2.0 * sys.nuclear_spin)) + 1;
  std::vector<HyperfineLevel> out;
  out.reserve(2 * n_mI);
  for (double m_S : {-0.5, +0.5}) {
    for (int k = 0; k < n_mI; ++k) {
      const double m_I = -sys.nuclear_spin + k;
      const double energy = sys.g_factor * kBohrMagnetonGHzPerT * fp.B_tesla * m_S +
                            sys.hyperfine_A_GHz * m_S * m_I;
      out.push_back({m_S, m_I, energy});
    }
  }
  std::sort(out.begin(), out.end(), [](const HyperfineLevel& a, const HyperfineLevel& b) {
    if (a.energy_GHz != b.energy_GHz) return a.energy_GHz < b.energy_GHz;
    if (a.m_S != b.m_S) return a.m_S < b.m_S;
    return a.m_I < b.m_I;
  });
  return out;
}

double zeeman_splitting_GHz(double g_factor, double B_tesla) {
  if (B_tesla < 0.0) throw ConfigError("magnetic field must be >= 0");
  return g_factor * kBohrMagnetonGHzPerT * B_tesla;
}

double mixing_ratio(double A_GHz, double delta_Eg_GHz) {
  if (delta_Eg_GHz <= 0.0)
    throw NumericError("degenerate Zeeman splitting: perturbative mixing undefined");
  const double r = A_GHz / delta_Eg_GHz;
  return r * r;
}

}  // namespace holeburn
