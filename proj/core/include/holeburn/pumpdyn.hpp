#pragma once

#include <vector>

#include <Eigen/Dense>

#include "holeburn/fitkit.hpp"
#include "holeburn/levels.hpp"

namespace holeburn {

// Optical decay branching over the nuclear spin projection: p(0) = 1 - 2*eps,
// p(+1) = p(-1) = eps, split between the two m_S branches.
struct BranchingTable {
  double epsilon = 0.0;          // nuclear flip probability per decay, <= 1/3
  double mS_split_lower = 0.5;   // probability of landing in the lower m_S branch

  void validate() const;
  double p_preserve() const { return 1.0 - 2.0 * epsilon; }
};

struct GroundRates {
  double R0 = 0.0;       // delta m_I = 0 channel, 1/s
  double R_plus = 0.0;   // delta m_I = +1
  double R_minus = 0.0;  // delta m_I = -1
};

struct PumpSchedule {
  double burn_duration_s = 0.0;
  double pump_rate = 0.0;               // W, 1/s
  std::vector<int> pumped_levels;       // indices into the level list
  std::vector<double> delay_grid_s;     // ascending, >= 0

  void validate(int level_count) const;
};

// Column-generator convention: dp/dt = G p, G(j,i) is the rate i -> j and
// each diagonal entry is minus its column sum.
using RateMatrix = Eigen::MatrixXd;

// Ground-manifold generator: R0 connects (m_S, m_I) <-> (-m_S, m_I), and
// R+/R- connect (m_S, m_I) <-> (-m_S, m_I +- 1). Downhill rate equals the
// channel rate, uphill carries the Boltzmann factor at fp.T.
RateMatrix build_generator(const std::vector<HyperfineLevel>& levels,
                           const GroundRates& rates, const FieldPoint& fp);

Eigen::VectorXd thermal_populations(const std::vector<HyperfineLevel>& levels,
                                    const FieldPoint& fp);

// Exact propagation of a detailed-balance generator via the symmetrized
// eigendecomposition; reusable across many times.
class GroundPropagator {
 public:
  GroundPropagator(const RateMatrix& generator, const Eigen::VectorXd& stationary);

  Eigen::VectorXd at(const Eigen::VectorXd& p0, double t_s) const;
  // 1 / (smallest nonzero decay rate); infinity when fully degenerate
  double slowest_lifetime_s() const;

 private:
  Eigen::MatrixXd modes_;       // sqrt(pi) * V
  Eigen::MatrixXd modes_inv_;   // V^T / sqrt(pi)
  Eigen::VectorXd decay_rates_; // -eigenvalues, >= 0
};

// Burn-phase propagation with one effective excited level per pumped ground
// level; residual excited population is folded back through the branching
// distribution. Returns ground populations (sum preserved).
Eigen::VectorXd simulate_burn(const RateMatrix& ground_gen,
                              const std::vector<HyperfineLevel>& levels,
                              const SpinSystem& sys,
                              const BranchingTable& branching,
                              const PumpSchedule& sched, const FieldPoint& fp);

// Free decay of the hole amplitude sum_{pumped} max(0, thermal - p) over the
// schedule's delay grid.
DecayCurve hole_decay(const Eigen::VectorXd& populations,
                      const RateMatrix& ground_gen,
                      const std::vector<HyperfineLevel>& levels,
                      const PumpSchedule& sched, const FieldPoint& fp);

struct AmplitudeScanRow {
  double burn_duration_s;
  double x_f;
  double x_s;
};

struct AmplitudeScanResult {
  std::vector<AmplitudeScanRow> rows;
  BiexpFit fit;  // shared time constants across the scan
};

// Burn + decay + global bi-exponential decomposition per burn duration.
AmplitudeScanResult amplitude_scan(const RateMatrix& ground_gen,
                                   const std::vector<HyperfineLevel>& levels,
                                   const SpinSystem& sys,
                                   const BranchingTable& branching,
                                   const PumpSchedule& base_schedule,
                                   const std::vector<double>& burn_durations_s,
                                   const FieldPoint& fp);

}  // namespace holeburn
