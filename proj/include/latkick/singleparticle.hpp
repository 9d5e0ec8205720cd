#pragma once

// Continuous 1D single-particle solver for V(x) = V0 cos^2(pi x / a):
// spectra under periodic or hard-wall boundaries, tight-binding J extraction
// from the first-band width, and recoil-energy conversion.

#include <span>
#include <vector>

#include "latkick/errors.hpp"

namespace latkick {

enum class Wall { periodic, hard_wall };

struct ContinuousLattice {
  double V0 = 0.0;          // lattice depth (energy)
  double period = 1.0;      // lattice constant a (length)
  int n_cells = 1;
  Wall boundary = Wall::periodic;
  int grid_per_cell = 32;   // >= 16 (documented convergence floor)
  double mass = 1.0;
  double hbar = 1.0;

  double length() const { return period * n_cells; }
  void validate() const;
};

enum class SpectrumMethod { finite_difference, spectral };

/// Lowest n_levels eigenvalues of -(hbar^2/2m) d^2/dx^2 + V(x), refined until
/// successive grid (or cutoff) doublings agree to 1e-6 relative. The
/// finite-difference path uses second-order central differences with
/// Richardson extrapolation; the spectral path uses plane waves (periodic)
/// or a sine basis (hard wall). Throws numerical_error if refinement stalls.
std::vector<double> solve_spectrum(const ContinuousLattice& lat, int n_levels,
                                   SpectrumMethod method = SpectrumMethod::finite_difference);

struct BandResult {
  std::vector<double> eigenvalues;  // the first band, ascending
  double alpha = 0.0;               // band center (E_max + E_min) / 2
  double hop_J = 0.0;
  double band_fit_residual = 0.0;   // rms misfit of E(q) = alpha - 2J cos(qa), / bandwidth
};

/// Tight-binding parameters from a computed first band of n_sites levels.
/// With the periodic q grid q_n = 2 pi n / (n_sites a) the extraction reduces
/// to J = 0.25 (E_max - E_min); the hard-wall grid q_m = m pi / ((n_sites+1) a)
/// generalizes it to J = (E_max - E_min) / (2 (cos q_min a - cos q_max a)).
/// If more than n_sites eigenvalues are supplied, a spectral gap above the
/// band is required; otherwise throws numerical_error (band identification).
BandResult tunneling_from_band(std::span<const double> eigenvalues, int n_sites,
                               double lattice_constant = 1.0,
                               Wall grid = Wall::periodic);

/// E_R = h^2 / (2 m lambda^2) with lambda = 2a.
double recoil_energy(const ContinuousLattice& lat);

}  // namespace latkick
