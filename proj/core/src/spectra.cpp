#include "holeburn/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "holeburn/errors.hpp"

namespace holeburn {

void Spectrum::validate() const {
  if (freq_hz.size() != optical_depth.size())
    throw ConfigError("spectrum grid/depth size mismatch");
  for (double d : optical_depth)
    if (d < 0.0 || !std::isfinite(d))
      throw NumericError("optical depth must be finite and >= 0");
}

double Spectrum::peak_depth() const {
  return optical_depth.empty()
             ? 0.0
             : *std::max_element(optical_depth.begin(), optical_depth.end());
}

double Spectrum::peak_alpha_per_cm(double length_cm) const {
  if (length_cm <= 0.0) throw ConfigError("crystal length must be > 0");
  return peak_depth() / length_cm;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw ConfigError("grid needs at least 2 points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * double(i) / double(n - 1);
  return g;
}

Spectrum inhomogeneous_profile(double peak_d, double fwhm_hz,
                               const std::vector<double>& freq_grid_hz,
                               double center_hz) {
  if (fwhm_hz <= 0.0) throw ConfigError("FWHM must be > 0");
  if (peak_d < 0.0) throw ConfigError("peak depth must be >= 0");
  const double c = 4.0 * std::log(2.0) / (fwhm_hz * fwhm_hz);
  Spectrum s;
  s.freq_hz = freq_grid_hz;
  s.optical_depth.reserve(freq_grid_hz.size());
  for (double f : freq_grid_hz) {
    const double x = f - center_hz;
    s.optical_depth.push_back(peak_d * std::exp(-c * x * x));
  }
  return s;
}

Spectrum split_profile(const Spectrum& profile, double split_hz) {
  profile.validate();
  if (split_hz == 0.0) return profile;
  Spectrum s;
  s.freq_hz = profile.freq_hz;
  s.optical_depth.resize(profile.freq_hz.size(), 0.0);
  // resample each half-weight copy off the original grid
  const auto& f = profile.freq_hz;
  auto sample = [&](double x) -> double {
    if (f.empty() || x <= f.front() || x >= f.back()) {
      // fall to zero outside support
      if (f.empty()) return 0.0;
      if (x <= f.front())
        return x == f.front() ? profile.optical_depth.front() : 0.0;
      return x == f.back() ? profile.optical_depth.back() : 0.0;
    }
    auto it = std::lower_bound(f.begin(), f.end(), x);
    const std::size_t hi = std::size_t(it - f.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - f[lo]) / (f[hi] - f[lo]);
    return (1.0 - t) * profile.optical_depth[lo] + t * profile.optical_depth[hi];
  };
  for (std::size_t i = 0; i < f.size(); ++i)
    s.optical_depth[i] =
        0.5 * (sample(f[i] - split_hz / 2.0) + sample(f[i] + split_hz / 2.0));
  return s;
}

namespace {
double feature_depth(const HoleFeature& h, double f) {
  const double x = f - h.center_hz;
  if (h.shape == HoleShape::Lorentzian) {
    const double hw = h.width_hz / 2.0;
    return h.depth * hw * hw / (x * x + hw * hw);
  }
  const double c = 4.0 * std::log(2.0) / (h.width_hz * h.width_hz);
  return h.depth * std::exp(-c * x * x);
}
}  // namespace

Spectrum hole_spectrum(const Spectrum& profile, const HoleFeature& hole,
                       const std::vector<HoleFeature>& side_holes) {
  profile.validate();
  if (hole.width_hz <= 0.0) throw ConfigError("hole width must be > 0");
  for (const auto& sh : side_holes)
    if (sh.width_hz <= 0.0) throw ConfigError("side-hole width must be > 0");

  Spectrum s = profile;
  for (std::size_t i = 0; i < s.freq_hz.size(); ++i) {
    double d = s.optical_depth[i] - feature_depth(hole, s.freq_hz[i]);
    for (const auto& sh : side_holes) d -= feature_depth(sh, s.freq_hz[i]);
    if (d < 0.0) {
      d = 0.0;
      s.clipped = true;
    }
    s.optical_depth[i] = d;
  }
  return s;
}

Spectrum comb_transmission(const Spectrum& profile, const CombSpec& comb,
                           double center_hz) {
  profile.validate();
  comb.validate();
  if (comb.bandwidth_hz <= 0.0) throw ConfigError("comb bandwidth must be > 0");
  if (!profile.freq_hz.empty() &&
      (center_hz - comb.bandwidth_hz / 2.0 < profile.freq_hz.front() ||
       center_hz + comb.bandwidth_hz / 2.0 > profile.freq_hz.back()))
    throw ConfigError("comb bandwidth exceeds profile support");

  Spectrum s = profile;
  const double lo = center_hz - comb.bandwidth_hz / 2.0;
  const double hi = center_hz + comb.bandwidth_hz / 2.0;
  const double half_tooth = comb.delta_hz / (2.0 * comb.finesse);
  for (std::size_t i = 0; i < s.freq_hz.size(); ++i) {
    const double f = s.freq_hz[i];
    if (f < lo || f > hi) continue;
    const double phase = std::remainder(f - center_hz, comb.delta_hz);
    const bool in_tooth = std::abs(phase) < half_tooth;
    const double comb_val = in_tooth ? comb.d0 + comb.d : comb.d0;
    s.optical_depth[i] = std::min(s.optical_depth[i], comb_val);
  }
  return s;
}

double integrated_depth(const Spectrum& s) {
  double acc = 0.0;
  for (std::size_t i = 1; i < s.freq_hz.size(); ++i)
    acc += 0.5 * (s.optical_depth[i] + s.optical_depth[i - 1]) *
           (s.freq_hz[i] - s.freq_hz[i - 1]);
  return acc;
}

}  // namespace holeburn
