#pragma once

// Gradiometer calculators: boost phase acquired from a physical tilt in a
// field gradient, the tilt-duration product needed for a target phase, and
// oscillation-period estimates from the tight-binding frequency law.
//
// This module works in SI units with a small CODATA constants table; the rest
// of the library stays in hbar = m = 1 units. The two regimes never mix
// inside one computation.

#include "latkick/errors.hpp"

namespace latkick {

namespace constants {
// CODATA 2018 / SI exact values
inline constexpr double kHbar = 1.054571817e-34;          // J s
inline constexpr double kPlanck = 6.62607015e-34;         // J s (exact)
inline constexpr double kBohrMagneton = 9.2740100783e-24; // J / T
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg
inline constexpr double kMassRb87 = 86.909180531 * kAtomicMassUnit;  // kg
inline constexpr double kMassCr52 = 51.9405062 * kAtomicMassUnit;    // kg
}  // namespace constants

struct GradiometerParams {
  double charge = 0.0;            // kg for gravity, J/T for magnetic moments
  double gradient = 0.0;          // m/s^2 per ... (gravity: acceleration; magnetic: T/m)
  double lattice_constant = 0.0;  // m
  double tilt_angle = 0.0;        // rad, in [0, pi/2]
  double tilt_time = 0.0;         // s
  double hbar = constants::kHbar;

  void validate() const;
};

/// delta_phi = q Gamma a sin(theta) T / hbar between neighboring sites.
double gradiometer_phase(const GradiometerParams& p);

/// sin(theta) T = delta_phi hbar / (q Gamma a); throws validation_error when
/// the coupling q Gamma a vanishes.
double required_tilt_product(const GradiometerParams& p, double target_phase);

/// 2 pi / tb_frequency(ka, J, n_sites); flags the ka -> 0 divergence.
double oscillation_period_estimate(double hop_J, int n_sites, double ka,
                                   double hbar = constants::kHbar);

}  // namespace latkick
