#pragma once

#include <vector>

namespace holeburn {

// Square-tooth atomic frequency comb.
struct CombSpec {
  double d = 0.0;            // peak optical depth of the teeth
  double d0 = 0.0;           // residual background depth
  double finesse = 2.0;      // period / tooth width, > 1
  double delta_hz = 0.0;     // tooth spacing
  double bandwidth_hz = 0.0; // comb window

  void validate() const;
  double echo_delay_s() const;          // 1/delta
  double mean_depth() const;            // d0 + d/finesse (exact)
};

struct EfficiencyReport {
  double eta = 0.0;
  double d_tilde = 0.0;         // d/F
  double factor_absorption = 0.0;  // d_tilde^2 exp(-d_tilde)
  double factor_dephasing = 0.0;   // sinc^2(pi/F)
  double factor_background = 0.0;  // exp(-d0)
};

// eta = d~^2 exp(-d~) sinc^2(pi/F) exp(-d0), with d~ = d/F and
// sinc(x) = sin(x)/x (unnormalized).
EfficiencyReport afc_efficiency(const CombSpec& spec);

// Closed form F = pi / arctan(2*pi/d); strictly increasing in d.
double optimal_finesse(double d);

struct MaxEfficiencyResult {
  double d_star = 0.0;
  double finesse_star = 0.0;
  double eta_star = 0.0;
};

// Maximizes efficiency over d in [d_min, d_max], with F = optimal_finesse(d)
// and d0 = d0_ratio * d. Relative tolerance 1e-4 on d_star.
MaxEfficiencyResult max_efficiency(double d0_ratio, double d_min = 0.1,
                                   double d_max = 50.0);

struct EfficiencyCurvePoint {
  double d;
  double finesse_opt;
  double eta;
  EfficiencyReport report;
};

std::vector<EfficiencyCurvePoint> efficiency_curve(double d0_ratio,
                                                   const std::vector<double>& d_grid);

// Square comb sampled on a frequency grid: teeth of depth d sitting on
// background d0 (tooth value d0 + d), duty cycle 1/F, teeth centered on
// integer multiples of delta. Grid resolution must be finer than delta/10.
std::vector<double> comb_profile(const CombSpec& spec,
                                 const std::vector<double>& freq_grid_hz);

}  // namespace holeburn
