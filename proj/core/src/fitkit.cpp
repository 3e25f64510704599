#include "holeburn/fitkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "holeburn/errors.hpp"

namespace holeburn {

namespace {

struct InnerSolve {
  double d_f = 0.0;
  double d_s = 0.0;
  double ssr = 0.0;
  bool clipped = false;
};

// Non-negative least squares with two basis columns, solved exactly by
// comparing the unconstrained optimum with the two single-column fits.
InnerSolve solve_amplitudes(const DecayCurve& curve, double T_fast, double T_slow) {
  double Saa = 0, Sbb = 0, Sab = 0, Say = 0, Sby = 0, Syy = 0;
  for (const auto& p : curve.points) {
    const double w = p.sigma > 0.0 ? 1.0 / (p.sigma * p.sigma) : 1.0;
    const double a = std::exp(-p.t_s / T_fast);
    const double b = std::exp(-p.t_s / T_slow);
    Saa += w * a * a;
    Sbb += w * b * b;
    Sab += w * a * b;
    Say += w * a * p.amplitude;
    Sby += w * b * p.amplitude;
    Syy += w * p.amplitude * p.amplitude;
  }
  auto ssr_at = [&](double df, double ds) {
    return Syy - 2.0 * (df * Say + ds * Sby) + df * df * Saa + ds * ds * Sbb +
           2.0 * df * ds * Sab;
  };
  InnerSolve best;
  best.ssr = std::numeric_limits<double>::infinity();
  const double det = Saa * Sbb - Sab * Sab;
  if (det > 1e-14 * Saa * Sbb) {
    const double df = (Sbb * Say - Sab * Sby) / det;
    const double ds = (Saa * Sby - Sab * Say) / det;
    if (df >= 0.0 && ds >= 0.0) {
      best = {df, ds, ssr_at(df, ds), false};
      return best;
    }
  }
  // clipped: best single-column solutions
  const double df1 = Saa > 0.0 ? std::max(0.0, Say / Saa) : 0.0;
  const double ds1 = Sbb > 0.0 ? std::max(0.0, Sby / Sbb) : 0.0;
  const double ssr_f = ssr_at(df1, 0.0);
  const double ssr_s = ssr_at(0.0, ds1);
  if (ssr_f <= ssr_s)
    best = {df1, 0.0, ssr_f, true};
  else
    best = {0.0, ds1, ssr_s, true};
  return best;
}

double objective_impl(const std::vector<DecayCurve>& curves, double T_fast,
                      double T_slow, bool* clipped = nullptr) {
  double ssr = 0.0;
  for (const auto& c : curves) {
    const InnerSolve s = solve_amplitudes(c, T_fast, T_slow);
    ssr += s.ssr;
    if (clipped && s.clipped) *clipped = true;
  }
  return ssr;
}

// Nelder-Mead in (log T_fast, log T_slow).
std::pair<double, double> refine(const std::vector<DecayCurve>& curves,
                                 double Tf0, double Ts0, int max_iter) {
  using V = std::array<double, 2>;
  auto eval = [&](const V& v) {
    return objective_impl(curves, std::exp(v[0]), std::exp(v[1]));
  };
  std::array<V, 3> simplex = {
      V{std::log(Tf0), std::log(Ts0)},
      V{std::log(Tf0) + 0.05, std::log(Ts0)},
      V{std::log(Tf0), std::log(Ts0) + 0.05}};
  std::array<double, 3> f;
  for (int i = 0; i < 3; ++i) f[i] = eval(simplex[i]);

  for (int it = 0; it < max_iter; ++it) {
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return f[a] < f[b]; });
    const int lo = idx[0], mid = idx[1], hi = idx[2];
    if (std::abs(f[hi] - f[lo]) <= 1e-14 * (std::abs(f[lo]) + 1e-300)) break;

    V centroid{(simplex[lo][0] + simplex[mid][0]) / 2.0,
               (simplex[lo][1] + simplex[mid][1]) / 2.0};
    auto blend = [&](double t) {
      return V{centroid[0] + t * (centroid[0] - simplex[hi][0]),
               centroid[1] + t * (centroid[1] - simplex[hi][1])};
    };
    V refl = blend(1.0);
    double f_refl = eval(refl);
    if (f_refl < f[lo]) {
      V exp_pt = blend(2.0);
      double f_exp = eval(exp_pt);
      if (f_exp < f_refl) {
        simplex[hi] = exp_pt;
        f[hi] = f_exp;
      } else {
        simplex[hi] = refl;
        f[hi] = f_refl;
      }
    } else if (f_refl < f[mid]) {
      simplex[hi] = refl;
      f[hi] = f_refl;
    } else {
      V con = blend(-0.5);
      double f_con = eval(con);
      if (f_con < f[hi]) {
        simplex[hi] = con;
        f[hi] = f_con;
      } else {
        for (int i : {mid, hi}) {
          simplex[i] = {(simplex[i][0] + simplex[lo][0]) / 2.0,
                        (simplex[i][1] + simplex[lo][1]) / 2.0};
          f[i] = eval(simplex[i]);
        }
      }
    }
  }
  int best = int(std::min_element(f.begin(), f.end()) - f.begin());
  double a = std::exp(simplex[best][0]);
  double b = std::exp(simplex[best][1]);
  if (a > b) std::swap(a, b);
  return {a, b};
}

Eigen::Matrix2d covariance_block(const std::vector<DecayCurve>& curves,
                                 const BiexpFit& fit) {
  std::size_t n_pts = 0;
  for (const auto& c : curves) n_pts += c.points.size();
  const std::size_t n_par = 2 + 2 * curves.size();
  if (n_pts <= n_par) return Eigen::Matrix2d::Zero();

  Eigen::MatrixXd J(n_pts, n_par);
  J.setZero();
  Eigen::VectorXd r(n_pts);
  std::size_t row = 0;
  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const double df = fit.amplitudes[ci][0];
    const double ds = fit.amplitudes[ci][1];
    for (const auto& p : curves[ci].points) {
      const double w = p.sigma > 0.0 ? 1.0 / p.sigma : 1.0;
      const double ef = std::exp(-p.t_s / fit.T_fast_s);
      const double es = std::exp(-p.t_s / fit.T_slow_s);
      J(row, 0) = w * df * ef * p.t_s / (fit.T_fast_s * fit.T_fast_s);
      J(row, 1) = w * ds * es * p.t_s / (fit.T_slow_s * fit.T_slow_s);
      J(row, 2 + 2 * ci) = w * ef;
      J(row, 3 + 2 * ci) = w * es;
      r(row) = w * (p.amplitude - df * ef - ds * es);
      ++row;
    }
  }
  const double s2 = r.squaredNorm() / double(n_pts - n_par);
  const Eigen::MatrixXd JtJ = J.transpose() * J;
  const Eigen::MatrixXd cov =
      s2 * JtJ.completeOrthogonalDecomposition().pseudoInverse();
  return cov.topLeftCorner<2, 2>();
}

}  // namespace

double biexp_objective(const std::vector<DecayCurve>& curves, double T_fast,
                       double T_slow) {
  return objective_impl(curves, T_fast, T_slow);
}

BiexpFit fit_biexp_global(const std::vector<DecayCurve>& curves,
                          const BiexpOptions& opt) {
  if (curves.empty()) throw ConfigError("biexp fit needs at least one curve");
  double t_min = std::numeric_limits<double>::infinity();
  double t_max = 0.0;
  for (const auto& c : curves) {
    if (c.points.size() < 4)
      throw ConfigError("each decay curve needs at least 4 points");
    for (const auto& p : c.points) {
      if (p.t_s > 0.0) t_min = std::min(t_min, p.t_s);
      t_max = std::max(t_max, p.t_s);
    }
  }
  if (!(t_max > 0.0) || !std::isfinite(t_min))
    throw ConfigError("decay curves must contain positive delays");

  const double lo = opt.t_lo_factor * t_min;
  const double hi = opt.t_hi_factor * t_max;
  const int n = opt.grid_points;

  // Multi-start grid over ordered (T_fast, T_slow); tie-break by smaller T_slow.
  double best_obj = std::numeric_limits<double>::infinity();
  double best_Tf = lo, best_Ts = hi;
  for (int j = n - 1; j >= 0; --j) {      // descending T_slow so ties prefer small
    const double Ts = lo * std::pow(hi / lo, double(j) / (n - 1));
    for (int i = 0; i < j; ++i) {
      const double Tf = lo * std::pow(hi / lo, double(i) / (n - 1));
      const double obj = objective_impl(curves, Tf, Ts);
      if (obj <= best_obj) {
        best_obj = obj;
        best_Tf = Tf;
        best_Ts = Ts;
      }
    }
  }

  auto [Tf, Ts] = refine(curves, best_Tf, best_Ts, opt.refine_iterations);
  if (objective_impl(curves, Tf, Ts) > best_obj) {  // keep the grid point
    Tf = best_Tf;
    Ts = best_Ts;
  }

  BiexpFit fit;
  fit.T_fast_s = Tf;
  fit.T_slow_s = Ts;
  bool clipped = false;
  double sum_df = 0.0, sum_ds = 0.0;
  for (const auto& c : curves) {
    const InnerSolve s = solve_amplitudes(c, Tf, Ts);
    fit.amplitudes.push_back({s.d_f, s.d_s});
    const double tot = s.d_f + s.d_s;
    if (tot > 0.0)
      fit.fractions.push_back({s.d_f / tot, s.d_s / tot});
    else
      fit.fractions.push_back({0.5, 0.5});
    fit.objective += s.ssr;
    sum_df += s.d_f;
    sum_ds += s.d_s;
    clipped = clipped || s.clipped;
  }
  fit.residual_norm = std::sqrt(std::max(0.0, fit.objective));

  // Single-exponential data can land its whole amplitude in the slow slot.
  // Canonicalize so the identified component is always reported as the fast
  // one; the empty slot is then flagged as unidentifiable below.
  double total = sum_df + sum_ds;
  if (total > 0.0 && sum_df <= 1e-4 * total) {
    fit.T_fast_s = fit.T_slow_s;
    for (auto& a : fit.amplitudes) std::swap(a[0], a[1]);
    for (auto& f : fit.fractions) std::swap(f[0], f[1]);
    std::swap(sum_df, sum_ds);
  }
  const bool both_present =
      total > 0.0 && std::min(sum_df, sum_ds) > 1e-4 * total;
  if (both_present && (Ts - Tf) < opt.collision_tol * Ts)
    throw DegenerateFitError(
        "time-constant collision: T_fast and T_slow converged to " +
        std::to_string(Ts) + " s");
  if (total > 0.0 && sum_ds <= 1e-4 * total) {
    fit.flags.push_back("slow_component_unidentifiable");
    // Re-solve each curve as a pure fast exponential so the dead slot
    // carries exactly zero amplitude instead of fit noise.
    fit.objective = 0.0;
    for (std::size_t i = 0; i < curves.size(); ++i) {
      double num = 0.0, den = 0.0;
      for (const auto& p : curves[i].points) {
        const double e = std::exp(-p.t_s / fit.T_fast_s);
        num += p.amplitude * e;
        den += e * e;
      }
      const double df = den > 0.0 ? std::max(0.0, num / den) : 0.0;
      fit.amplitudes[i] = {df, 0.0};
      fit.fractions[i] = {1.0, 0.0};
      for (const auto& p : curves[i].points) {
        const double r = p.amplitude - df * std::exp(-p.t_s / fit.T_fast_s);
        fit.objective += r * r;
      }
    }
    fit.residual_norm = std::sqrt(std::max(0.0, fit.objective));
  }
  if (total > 0.0 && sum_df <= 1e-4 * total)
    fit.flags.push_back("fast_component_unidentifiable");
  if (clipped) fit.flags.push_back("amplitude_clipped_at_zero");
  if (total == 0.0) fit.flags.push_back("all_amplitudes_zero");

  fit.time_constant_covariance = covariance_block(curves, fit);
  return fit;
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw ConfigError("power-law fit needs >= 3 points");
  double Sx = 0, Sy = 0, Sxx = 0, Sxy = 0;
  const double n = double(points.size());
  for (const auto& [B, T] : points) {
    if (B <= 0.0 || T <= 0.0)
      throw ConfigError("power-law fit requires positive inputs");
    const double x = std::log(B), y = std::log(T);
    Sx += x;
    Sy += y;
    Sxx += x * x;
    Sxy += x * y;
  }
  const double denom = n * Sxx - Sx * Sx;
  if (std::abs(denom) < 1e-30)
    throw NumericError("power-law fit: degenerate abscissa");
  const double slope = (n * Sxy - Sx * Sy) / denom;
  const double intercept = (Sy - slope * Sx) / n;

  double ssr = 0.0;
  for (const auto& [B, T] : points) {
    const double e = std::log(T) - (intercept + slope * std::log(B));
    ssr += e * e;
  }
  PowerLawFit fit;
  fit.exponent = -slope;  // T ~ B^(-a)
  fit.prefactor = std::exp(intercept);
  if (points.size() > 2) {
    const double s2 = ssr / (n - 2.0);
    fit.exponent_sigma = std::sqrt(s2 * n / denom);
  }
  return fit;
}

BootstrapResult bootstrap_biexp(const std::vector<DecayCurve>& curves,
                                int resamples, std::uint64_t seed,
                                const BiexpOptions& opt) {
  if (resamples < 100)
    throw ConfigError("bootstrap needs at least 100 resamples");
  const BiexpFit base = fit_biexp_global(curves, opt);

  // fitted values and residuals, pooled per curve
  std::vector<std::vector<double>> fitted(curves.size());
  std::vector<std::vector<double>> resid(curves.size());
  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    for (const auto& p : curves[ci].points) {
      const double m = base.amplitudes[ci][0] * std::exp(-p.t_s / base.T_fast_s) +
                       base.amplitudes[ci][1] * std::exp(-p.t_s / base.T_slow_s);
      fitted[ci].push_back(m);
      resid[ci].push_back(p.amplitude - m);
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<double> Tf_samples, Ts_samples;
  Tf_samples.reserve(resamples);
  for (int k = 0; k < resamples; ++k) {
    std::vector<DecayCurve> boot = curves;
    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
      std::uniform_int_distribution<std::size_t> pick(0, resid[ci].size() - 1);
      for (std::size_t i = 0; i < boot[ci].points.size(); ++i)
        boot[ci].points[i].amplitude = fitted[ci][i] + resid[ci][pick(rng)];
    }
    try {
      const BiexpFit f = fit_biexp_global(boot, opt);
      Tf_samples.push_back(f.T_fast_s);
      Ts_samples.push_back(f.T_slow_s);
    } catch (const NumericError&) {
      // degenerate resample; skipped
    }
  }

  auto stddev = [](const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= double(v.size());
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / double(v.size() - 1));
  };
  BootstrapResult out;
  out.T_fast_sigma = stddev(Tf_samples);
  out.T_slow_sigma = stddev(Ts_samples);
  out.resamples = int(Tf_samples.size());
  return out;
}

}  // namespace holeburn
