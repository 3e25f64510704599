#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace holeburn {

struct CurveMeta {
  std::optional<double> burn_duration_s;
  std::optional<double> B_tesla;
  std::optional<double> T_kelvin;
};

struct DecayPoint {
  double t_s = 0.0;
  double amplitude = 0.0;
  double sigma = 0.0;  // 0 means unweighted
};

struct DecayCurve {
  std::vector<DecayPoint> points;
  CurveMeta meta;
};

// Global two-exponential decomposition: T_fast and T_slow shared across all
// curves, non-negative amplitudes per curve.
struct BiexpFit {
  double T_fast_s = 0.0;
  double T_slow_s = 0.0;
  std::vector<std::array<double, 2>> amplitudes;  // (d_f, d_s) per curve
  std::vector<std::array<double, 2>> fractions;   // (x_f, x_s) per curve
  Eigen::Matrix2d time_constant_covariance = Eigen::Matrix2d::Zero();
  double residual_norm = 0.0;  // sqrt of weighted SSR
  double objective = 0.0;      // weighted SSR
  std::vector<std::string> flags;
};

struct BiexpOptions {
  int grid_points = 50;        // per axis, log-spaced multi-start grid
  double t_lo_factor = 0.3;    // grid spans [t_lo_factor*t_min, t_hi_factor*t_max]
  double t_hi_factor = 3.0;
  int refine_iterations = 300;
  double collision_tol = 1e-3;  // relative T separation treated as degenerate
};

// Shared-constant global fit; amplitudes are solved as an inner non-negative
// linear subproblem per (T_fast, T_slow). Deterministic. Throws
// DegenerateFitError when the two time constants collide.
BiexpFit fit_biexp_global(const std::vector<DecayCurve>& curves,
                          const BiexpOptions& opt = {});

// Weighted SSR of the best non-negative amplitudes at fixed time constants;
// used both internally and by brute-force oracles.
double biexp_objective(const std::vector<DecayCurve>& curves, double T_fast,
                       double T_slow);

struct PowerLawFit {
  double exponent = 0.0;       // T ~ B^(-exponent); positive means decaying
  double prefactor = 0.0;
  double exponent_sigma = 0.0;
};

// Log-log linear regression over (B, T) samples, all positive.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

struct BootstrapResult {
  double T_fast_sigma = 0.0;
  double T_slow_sigma = 0.0;
  int resamples = 0;
};

// Residual-resampling bootstrap of the global fit. Deterministic given seed.
BootstrapResult bootstrap_biexp(const std::vector<DecayCurve>& curves,
                                int resamples, std::uint64_t seed,
                                const BiexpOptions& opt = {});

}  // namespace holeburn
