#pragma once

#include <utility>
#include <vector>

#include "holeburn/levels.hpp"

namespace holeburn {

// Spin-lattice relaxation: direct (alpha_d * B^4, optionally with the
// coth thermal factor), Raman (alpha_r * T^9) and Orbach
// (alpha_o * exp(-gap/T)) processes.
struct SLRParams {
  double alpha_direct = 0.0;   // 1/(s T^4)
  double alpha_raman = 0.0;    // 1/(s K^9)
  double alpha_orbach = 0.0;   // 1/s
  double orbach_gap_K = 0.0;   // K
  bool include_coth = true;

  void validate() const;
};

// Electronic flip-flop channel. The base field profile is either a constant
// rate or a tabulated (B, rate) shape; the table is interpolated
// log-linearly and flagged as extrapolated outside its support.
struct FlipFlopParams {
  double base_rate = 0.0;                 // 1/s at the reference point
  double concentration_ppm = 10.0;
  double reference_concentration_ppm = 30.0;
  double nuclear_dilution = 8.0;          // typically 2I+1
  std::vector<std::pair<double, double>> field_profile;  // (B_tesla, rate 1/s)
  double validity_Bmax_tesla = 0.5;       // low-field regime bound

  void validate() const;
  // Combined rescaling (concentration / reference) / nuclear_dilution.
  double scaling() const;
};

struct FlipFlopRate {
  double rate = 0.0;  // 1/s
  bool extrapolated = false;
};

struct FieldScanModel {
  SLRParams slr;
  FlipFlopParams ff;
  SpinSystem sys;
};

struct Lifetimes {
  double T_fast_s = 0.0;
  double T_slow_s = 0.0;
  double slr_rate = 0.0;       // 1/s, channel breakdown
  double flipflop_rate = 0.0;  // 1/s
  bool extrapolated = false;
};

double direct_slr_rate(const SLRParams& p, const SpinSystem& sys, const FieldPoint& fp);
double total_slr_rate(const SLRParams& p, const SpinSystem& sys, const FieldPoint& fp);

FlipFlopRate flipflop_rate(const FlipFlopParams& p, const FieldPoint& fp);

// (R_plus, R_minus); equal in the axially symmetric model but reported
// separately.
std::pair<double, double> nuclear_flip_rates(double R0, double A_GHz,
                                             double delta_Eg_GHz);

Lifetimes predict_lifetimes(const FieldScanModel& m, const FieldPoint& fp);

}  // namespace holeburn
