#include "holeburn/afc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "holeburn/errors.hpp"

namespace holeburn {

namespace {
constexpr double kPi = std::numbers::pi;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }
}  // namespace

void CombSpec::validate() const {
  if (d <= 0.0) throw ConfigError("comb peak depth d must be > 0");
  if (d0 < 0.0 || d0 > d) throw ConfigError("residual depth d0 must lie in [0, d]");
  if (finesse <= 1.0) throw ConfigError("finesse must be > 1");
  if (delta_hz < 0.0) throw ConfigError("tooth spacing must be >= 0");
}

double CombSpec::echo_delay_s() const {
  if (delta_hz <= 0.0) throw NumericError("echo delay undefined for zero tooth spacing");
  return 1.0 / delta_hz;
}

double CombSpec::mean_depth() const { return d0 + d / finesse; }

EfficiencyReport afc_efficiency(const CombSpec& spec) {
  spec.validate();
  EfficiencyReport r;
  r.d_tilde = spec.d / spec.finesse;
  r.factor_absorption = r.d_tilde * r.d_tilde * std::exp(-r.d_tilde);
  const double s = sinc(kPi / spec.finesse);
  r.factor_dephasing = s * s;
  r.factor_background = std::exp(-spec.d0);
  r.eta = r.factor_absorption * r.factor_dephasing * r.factor_background;
  return r;
}

double optimal_finesse(double d) {
  if (d <= 0.0) throw ConfigError("optical depth must be > 0");
  return kPi / std::atan(2.0 * kPi / d);
}

namespace {
double eta_at(double d, double d0_ratio) {
  CombSpec s;
  s.d = d;
  s.d0 = d0_ratio * d;
  s.finesse = optimal_finesse(d);
  return afc_efficiency(s).eta;
}
}  // namespace

MaxEfficiencyResult max_efficiency(double d0_ratio, double d_min, double d_max) {
  if (d0_ratio < 0.0 || d0_ratio >= 1.0)
    throw ConfigError("d0_ratio must lie in [0, 1)");
  if (!(d_min > 0.0 && d_max > d_min)) throw ConfigError("empty depth range");

  // Coarse log-spaced scan to bracket the maximum, then golden-section.
  const int n = 200;
  double best_d = d_min;
  double best_eta = -1.0;
  for (int i = 0; i <= n; ++i) {
    const double d = d_min * std::pow(d_max / d_min, double(i) / n);
    const double e = eta_at(d, d0_ratio);
    if (e > best_eta) {
      best_eta = e;
      best_d = d;
    }
  }
  double lo = std::max(d_min, best_d / std::pow(d_max / d_min, 1.5 / n));
  double hi = std::min(d_max, best_d * std::pow(d_max / d_min, 1.5 / n));
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - gr * (b - a), dd = a + gr * (b - a);
  double fc = eta_at(c, d0_ratio), fd = eta_at(dd, d0_ratio);
  while ((b - a) > 1e-5 * std::max(1.0, a)) {
    if (fc > fd) {
      b = dd; dd = c; fd = fc;
      c = b - gr * (b - a);
      fc = eta_at(c, d0_ratio);
    } else {
      a = c; c = dd; fc = fd;
      dd = a + gr * (b - a);
      fd = eta_at(dd, d0_ratio);
    }
  }
  MaxEfficiencyResult out;
  out.d_star = 0.5 * (a + b);
  out.eta_star = eta_at(out.d_star, d0_ratio);
  if (best_eta > out.eta_star) {  // boundary maximum
    out.d_star = best_d;
    out.eta_star = best_eta;
  }
  out.finesse_star = optimal_finesse(out.d_star);
  return out;
}

std::vector<EfficiencyCurvePoint> efficiency_curve(double d0_ratio,
                                                   const std::vector<double>& d_grid) {
  if (d0_ratio < 0.0 || d0_ratio >= 1.0)
    throw ConfigError("d0_ratio must lie in [0, 1)");
  std::vector<EfficiencyCurvePoint> out;
  out.reserve(d_grid.size());
  double prev = 0.0;
  for (double d : d_grid) {
    if (d <= 0.0 || d < prev) throw ConfigError("depth grid must be positive ascending");
    prev = d;
    CombSpec s;
    s.d = d;
    s.d0 = d0_ratio * d;
    s.finesse = optimal_finesse(d);
    EfficiencyCurvePoint p;
    p.d = d;
    p.finesse_opt = s.finesse;
    p.report = afc_efficiency(s);
    p.eta = p.report.eta;
    out.push_back(p);
  }
  return out;
}

std::vector<double> comb_profile(const CombSpec& spec,
                                 const std::vector<double>& freq_grid_hz) {
  spec.validate();
  if (spec.delta_hz <= 0.0) throw ConfigError("comb requires delta > 0");
  if (freq_grid_hz.size() >= 2) {
    const double spacing = freq_grid_hz[1] - freq_grid_hz[0];
    if (spacing > spec.delta_hz / 10.0)
      throw ConfigError("frequency grid coarser than delta/10");
  }
  const double half_tooth = spec.delta_hz / (2.0 * spec.finesse);
  std::vector<double> out;
  out.reserve(freq_grid_hz.size());
  for (double f : freq_grid_hz) {
    const double phase = std::remainder(f, spec.delta_hz);  // in [-delta/2, delta/2]
    const bool in_tooth = std::abs(phase) < half_tooth;
    out.push_back(in_tooth ? spec.d0 + spec.d : spec.d0);
  }
  return out;
}

}  // namespace holeburn
