#pragma once

#include <vector>

namespace holeburn {

// Bohr magneton and Boltzmann constant in frequency units.
// mu_B/h = 13.996 GHz/T, k_B/h = 20.836619 GHz/K.
inline constexpr double kBohrMagnetonGHzPerT = 13.996;
inline constexpr double kBoltzmannGHzPerK = 20.836619;

// Kramers doublet ground state (effective S = 1/2) with nuclear spin I.
struct SpinSystem {
  double electron_spin = 0.5;       // fixed 1/2
  double nuclear_spin = 3.5;        // half-integer or integer
  double g_factor = 1.47;           // effective g along the field axis
  double hyperfine_A_GHz = 0.0;     // axial hyperfine constant
  double optical_lifetime_s = 225e-6;
  double isotopic_purity = 1.0;

  void validate() const;            // throws ConfigError
  int ground_level_count() const;   // (2S+1)(2I+1)
};

struct FieldPoint {
  double B_tesla = 0.0;
  double T_kelvin = 3.0;

  void validate() const;
  double thermal_energy_GHz() const { return kBoltzmannGHzPerK * T_kelvin; }
};

// Product state |m_S>|m_I> in the secular (high-field) approximation.
struct HyperfineLevel {
  double m_S;
  double m_I;
  double energy_GHz;  // relative to manifold center
};

// Secular energies E = g*mu_B*B*m_S + A*m_S*m_I, sorted by energy
// (ties broken by m_S then m_I).
std::vector<HyperfineLevel> enumerate_levels(const SpinSystem& sys,
                                             const FieldPoint& fp);

// Electronic ground-state Zeeman splitting g*mu_B*B in GHz.
double zeeman_splitting_GHz(double g_factor, double B_tesla);

// Perturbative suppression (A/dE_g)^2 of the nuclear-spin-flipping channels.
// Throws NumericError for a degenerate Zeeman splitting.
double mixing_ratio(double A_GHz, double delta_Eg_GHz);

}  // namespace holeburn
