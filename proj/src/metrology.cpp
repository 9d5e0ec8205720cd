#include "latkick/metrology.hpp"

#include <cmath>
#include <numbers>

#include "latkick/analysis.hpp"

namespace latkick {

void GradiometerParams::validate() const {
  if (lattice_constant <= 0.0) {
    throw validation_error("GradiometerParams: lattice_constant must be > 0");
  }
  if (tilt_time < 0.0) throw validation_error("GradiometerParams: tilt_time must be >= 0");
  if (tilt_angle < 0.0 || tilt_angle > std::numbers::pi / 2.0) {
    throw validation_error("GradiometerParams: tilt_angle must lie in [0, pi/2]");
  }
  if (hbar <= 0.0) throw validation_error("GradiometerParams: hbar must be > 0");
}

double gradiometer_phase(const GradiometerParams& p) {
  p.validate();
  return p.charge * p.gradient * p.lattice_constant * std::sin(p.tilt_angle) *
         p.tilt_time / p.hbar;
}

double required_tilt_product(const GradiometerParams& p, double target_phase) {
  if (p.lattice_constant <= 0.0) {
    throw validation_error("required_tilt_product: lattice_constant must be > 0");
  }
  const double coupling = p.charge * p.gradient * p.lattice_constant;
  if (coupling <= 0.0) {
    throw validation_error("required_tilt_product: coupling q * Gamma * a must be > 0");
  }
  return target_phase * p.hbar / coupling;
}

double oscillation_period_estimate(double hop_J, int n_sites, double ka, double hbar) {
  const double omega = tb_frequency(ka, hop_J, n_sites, hbar);
  if (std::abs(omega) < 1e-300) {
    throw validation_error(
        "oscillation_period_estimate: period diverges where sin(ka) = 0");
  }
  return 2.0 * std::numbers::pi / std::abs(omega);
}

}  // namespace latkick
