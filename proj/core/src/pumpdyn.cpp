#include "holeburn/pumpdyn.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "holeburn/errors.hpp"

namespace holeburn {

void BranchingTable::validate() const {
  if (epsilon < 0.0 || epsilon > 1.0 / 3.0)
    throw ConfigError("branching epsilon must lie in [0, 1/3] so p(0) >= p(+-1)");
  if (mS_split_lower < 0.0 || mS_split_lower > 1.0)
    throw ConfigError("mS_split must lie in [0, 1]");
}

void PumpSchedule::validate(int level_count) const {
  if (burn_duration_s <= 0.0) throw ConfigError("burn_duration must be > 0");
  if (pump_rate < 0.0) throw ConfigError("pump rate must be >= 0");
  if (pumped_levels.empty()) throw ConfigError("pumped level set must be non-empty");
  for (int i : pumped_levels)
    if (i < 0 || i >= level_count)
      throw ConfigError("pumped level index out of range");
  double prev = -1.0;
  for (double t : delay_grid_s) {
    if (t < 0.0 || t < prev) throw ConfigError("delay grid must be ascending, >= 0");
    prev = t;
  }
}

namespace {

// Adds a detailed-balance pair: downhill at `rate`, uphill scaled by the
// Boltzmann factor.
void add_channel(RateMatrix& g, int i, int j, double rate,
                 const std::vector<HyperfineLevel>& levels, double kT_GHz) {
  if (rate <= 0.0) return;
  const double dE = levels[j].energy_GHz - levels[i].energy_GHz;
  double rate_ij, rate_ji;  // i->j, j->i
  if (dE >= 0.0) {
    rate_ij = rate * std::exp(-dE / kT_GHz);
    rate_ji = rate;
  } else {
    rate_ij = rate;
    rate_ji = rate * std::exp(dE / kT_GHz);
  }
  g(j, i) += rate_ij;
  g(i, i) -= rate_ij;
  g(i, j) += rate_ji;
  g(j, j) -= rate_ji;
}

int find_level(const std::vector<HyperfineLevel>& levels, double m_S, double m_I) {
  for (std::size_t k = 0; k < levels.size(); ++k)
    if (std::abs(levels[k].m_S - m_S) < 1e-9 && std::abs(levels[k].m_I - m_I) < 1e-9)
      return int(k);
  return -1;
}

}  // namespace

RateMatrix build_generator(const std::vector<HyperfineLevel>& levels,
                           const GroundRates& rates, const FieldPoint& fp) {
  fp.validate();
  if (rates.R0 < 0.0 || rates.R_plus < 0.0 || rates.R_minus < 0.0)
    throw ConfigError("relaxation rates must be >= 0");
  const int n = int(levels.size());
  RateMatrix g = RateMatrix::Zero(n, n);
  const double kT = fp.thermal_energy_GHz();

  for (int i = 0; i < n; ++i) {
    const auto& lv = levels[i];
    if (lv.m_S > 0.0) continue;  // each pair handled once, from the -1/2 side
    const int partner0 = find_level(levels, -lv.m_S, lv.m_I);
    if (partner0 >= 0) add_channel(g, i, partner0, rates.R0, levels, kT);
    const int partner_p = find_level(levels, -lv.m_S, lv.m_I + 1.0);
    if (partner_p >= 0) add_channel(g, i, partner_p, rates.R_plus, levels, kT);
    const int partner_m = find_level(levels, -lv.m_S, lv.m_I - 1.0);
    if (partner_m >= 0) add_channel(g, i, partner_m, rates.R_minus, levels, kT);
  }
  return g;
}

Eigen::VectorXd thermal_populations(const std::vector<HyperfineLevel>& levels,
                                    const FieldPoint& fp) {
  fp.validate();
  const double kT = fp.thermal_energy_GHz();
  Eigen::VectorXd p(levels.size());
  double e_min = levels.empty() ? 0.0 : levels.front().energy_GHz;
  for (const auto& lv : levels) e_min = std::min(e_min, lv.energy_GHz);
  for (std::size_t i = 0; i < levels.size(); ++i)
    p(i) = std::exp(-(levels[i].energy_GHz - e_min) / kT);
  return p / p.sum();
}

GroundPropagator::GroundPropagator(const RateMatrix& generator,
                                   const Eigen::VectorXd& stationary) {
  const int n = int(generator.rows());
  if (generator.cols() != n || stationary.size() != n)
    throw ConfigError("generator/stationary dimension mismatch");

  // Detailed balance makes D^{-1/2} G D^{1/2} symmetric (D = diag(pi)).
  Eigen::VectorXd sqrt_pi = stationary.array().sqrt();
  Eigen::MatrixXd sym = sqrt_pi.cwiseInverse().asDiagonal() * generator *
                        sqrt_pi.asDiagonal();
  sym = 0.5 * (sym + sym.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success)
    throw NumericError("generator eigendecomposition failed");
  decay_rates_ = -es.eigenvalues();
  // Snap the stationary mode to an exact zero rate: a O(eps)-sized residual
  // eigenvalue would otherwise leak population over many lifetimes.
  const double rate_scale = decay_rates_.cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i) {
    if (decay_rates_(i) < 1e-12 * rate_scale) decay_rates_(i) = 0.0;
    decay_rates_(i) = std::max(0.0, decay_rates_(i));
  }
  modes_ = sqrt_pi.asDiagonal() * es.eigenvectors();
  modes_inv_ = es.eigenvectors().transpose() *
               sqrt_pi.cwiseInverse().asDiagonal().toDenseMatrix();
}

Eigen::VectorXd GroundPropagator::at(const Eigen::VectorXd& p0, double t_s) const {
  Eigen::VectorXd coeff = modes_inv_ * p0;
  for (int i = 0; i < coeff.size(); ++i)
    coeff(i) *= std::exp(-decay_rates_(i) * t_s);
  return modes_ * coeff;
}

double GroundPropagator::slowest_lifetime_s() const {
  double r_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < decay_rates_.size(); ++i) {
    const double r = decay_rates_(i);
    if (r > 1e-12 * decay_rates_.maxCoeff()) r_min = std::min(r_min, r);
  }
  return 1.0 / r_min;
}

namespace {

// Decay targets (index, weight) for the effective excited level fed from
// ground level `origin`; edge m_I states lose the out-of-range channel and the
// weights renormalize over what remains.
std::vector<std::pair<int, double>> decay_targets(
    const std::vector<HyperfineLevel>& levels, int origin,
    const BranchingTable& br) {
  const double m_I = levels[origin].m_I;
  std::vector<std::pair<int, double>> targets;
  double total = 0.0;
  const double probs[3] = {br.p_preserve(), br.epsilon, br.epsilon};
  const double deltas[3] = {0.0, +1.0, -1.0};
  for (int k = 0; k < 3; ++k) {
    for (double m_S : {-0.5, +0.5}) {
      const double split =
          m_S < 0.0 ? br.mS_split_lower : 1.0 - br.mS_split_lower;
      const int idx = find_level(levels, m_S, m_I + deltas[k]);
      if (idx < 0) continue;
      const double w = probs[k] * split;
      if (w <= 0.0) continue;
      targets.emplace_back(idx, w);
      total += w;
    }
  }
  if (total <= 0.0)
    throw NumericError("branching table leaves no decay target");
  for (auto& [idx, w] : targets) w /= total;
  return targets;
}

}  // namespace

Eigen::VectorXd simulate_burn(const RateMatrix& ground_gen,
                              const std::vector<HyperfineLevel>& levels,
                              const SpinSystem& sys,
                              const BranchingTable& branching,
                              const PumpSchedule& sched, const FieldPoint& fp) {
  const int n = int(levels.size());
  if (ground_gen.rows() != n || ground_gen.cols() != n)
    throw ConfigError("generator dimension inconsistent with level list");
  branching.validate();
  sched.validate(n);
  sys.validate();

  const int k = int(sched.pumped_levels.size());
  const int dim = n + k;
  const double gamma = 1.0 / sys.optical_lifetime_s;

  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
  g.topLeftCorner(n, n) = ground_gen;

  std::vector<std::vector<std::pair<int, double>>> all_targets(k);
  for (int e = 0; e < k; ++e) {
    const int src = sched.pumped_levels[e];
    const int ex = n + e;
    g(ex, src) += sched.pump_rate;
    g(src, src) -= sched.pump_rate;
    all_targets[e] = decay_targets(levels, src, branching);
    for (const auto& [tgt, w] : all_targets[e]) g(tgt, ex) += gamma * w;
    g(ex, ex) -= gamma;
  }

  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (!std::isfinite(g(i, j))) throw NumericError("non-finite rate in generator");

  // Stiffness diagnostic: scaling-and-squaring cost explodes with the spread
  // between the fastest rate and the burn window.
  const double max_rate = g.cwiseAbs().maxCoeff();
  if (max_rate * sched.burn_duration_s > 1e12)
    throw NumericError(
        "pump system too stiff: max rate * burn duration = " +
        std::to_string(max_rate * sched.burn_duration_s) +
        " exceeds conditioning threshold 1e12");

  Eigen::VectorXd p0 = Eigen::VectorXd::Zero(dim);
  p0.head(n) = thermal_populations(levels, fp);

  const Eigen::MatrixXd prop = (g * sched.burn_duration_s).exp();
  Eigen::VectorXd p = prop * p0;

  // Residual excited population decays on the 225 us scale, far below any
  // ground relaxation time; fold it straight through the branching weights.
  Eigen::VectorXd ground = p.head(n);
  for (int e = 0; e < k; ++e)
    for (const auto& [tgt, w] : all_targets[e]) ground(tgt) += w * p(n + e);
  return ground;
}

DecayCurve hole_decay(const Eigen::VectorXd& populations,
                      const RateMatrix& ground_gen,
                      const std::vector<HyperfineLevel>& levels,
                      const PumpSchedule& sched, const FieldPoint& fp) {
  const int n = int(levels.size());
  if (populations.size() != n) throw ConfigError("population vector dimension mismatch");
  const Eigen::VectorXd thermal = thermal_populations(levels, fp);
  GroundPropagator prop(ground_gen, thermal);

  DecayCurve curve;
  curve.meta.burn_duration_s = sched.burn_duration_s;
  curve.meta.B_tesla = fp.B_tesla;
  curve.meta.T_kelvin = fp.T_kelvin;
  for (double t : sched.delay_grid_s) {
    const Eigen::VectorXd p = prop.at(populations, t);
    double amp = 0.0;
    for (int i : sched.pumped_levels) amp += thermal(i) - p(i);
    curve.points.push_back({t, std::max(0.0, amp), 0.0});
  }
  return curve;
}

AmplitudeScanResult amplitude_scan(const RateMatrix& ground_gen,
                                   const std::vector<HyperfineLevel>& levels,
                                   const SpinSystem& sys,
                                   const BranchingTable& branching,
                                   const PumpSchedule& base_schedule,
                                   const std::vector<double>& burn_durations_s,
                                   const FieldPoint& fp) {
  if (burn_durations_s.size() < 2)
    throw ConfigError("amplitude scan needs at least 2 burn durations");

  std::vector<DecayCurve> curves;
  for (double burn : burn_durations_s) {
    PumpSchedule sched = base_schedule;
    sched.burn_duration_s = burn;
    const Eigen::VectorXd pops =
        simulate_burn(ground_gen, levels, sys, branching, sched, fp);
    curves.push_back(hole_decay(pops, ground_gen, levels, sched, fp));
  }

  AmplitudeScanResult out;
  out.fit = fit_biexp_global(curves);
  for (std::size_t i = 0; i < curves.size(); ++i)
    out.rows.push_back({burn_durations_s[i], out.fit.fractions[i][0],
                        out.fit.fractions[i][1]});
  return out;
}

}  // namespace holeburn
