#pragma once

#include <string>
#include <vector>

#include "holeburn/afc.hpp"

namespace holeburn {

struct Spectrum {
  std::vector<double> freq_hz;
  std::vector<double> optical_depth;
  bool clipped = false;  // set when a composition hit the zero-depth floor

  void validate() const;
  // alpha = d / length, used with the peak depth by convention
  double peak_depth() const;
  double peak_alpha_per_cm(double length_cm) const;
};

std::vector<double> linspace(double lo, double hi, std::size_t n);

// Gaussian inhomogeneous optical-depth profile centered on the grid origin.
Spectrum inhomogeneous_profile(double peak_d, double fwhm_hz,
                               const std::vector<double>& freq_grid_hz,
                               double center_hz = 0.0);

// Two half-weight copies of the profile displaced by +-split/2 (the
// ground-state Zeeman splitting of the line).
Spectrum split_profile(const Spectrum& profile, double split_hz);

enum class HoleShape { Lorentzian, Gaussian };

struct HoleFeature {
  double center_hz = 0.0;
  double depth = 0.0;     // optical depth removed at the feature center
  double width_hz = 0.0;  // FWHM
  HoleShape shape = HoleShape::Lorentzian;
};

// Profile minus central hole and side-hole features; clipped at zero depth
// (clipped flag set) when a feature over-burns the local depth.
Spectrum hole_spectrum(const Spectrum& profile, const HoleFeature& hole,
                       const std::vector<HoleFeature>& side_holes = {});

// Embeds the comb over [center - bw/2, center + bw/2]; the window is replaced
// by the comb teeth capped at the local profile depth, outside it the profile
// is untouched.
Spectrum comb_transmission(const Spectrum& profile, const CombSpec& comb,
                           double center_hz = 0.0);

double integrated_depth(const Spectrum& s);  // trapezoidal, depth * Hz

}  // namespace holeburn
