#include "latkick/singleparticle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace latkick {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> lowest(const Eigen::VectorXd& evals, int n_levels) {
  std::vector<double> out(static_cast<std::size_t>(n_levels));
  for (int i = 0; i < n_levels; ++i) out[static_cast<std::size_t>(i)] = evals(i);
  return out;
}

// Second-order central finite differences at grid_per_cell points per period.
std::vector<double> fd_solve(const ContinuousLattice& lat, int grid_per_cell, int n_levels) {
  const int n_grid = grid_per_cell * lat.n_cells;
  const double h = lat.length() / n_grid;
  const double kin = lat.hbar * lat.hbar / (2.0 * lat.mass * h * h);
  auto potential = [&](double x) {
    const double c = std::cos(kPi * x / lat.period);
    return lat.V0 * c * c;
  };

  if (lat.boundary == Wall::hard_wall) {
    // psi(0) = psi(L) = 0: interior points only, symmetric tridiagonal
    const int n = n_grid - 1;
    if (n_levels > n) throw validation_error("solve_spectrum: n_levels exceeds grid size");
    Eigen::VectorXd diag(n), sub(n - 1);
    for (int i = 0; i < n; ++i) {
      diag(i) = 2.0 * kin + potential((i + 1) * h);
      if (i + 1 < n) sub(i) = -kin;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    return lowest(es.eigenvalues(), n_levels);
  }

  // periodic: tridiagonal plus wrap corners; dense solve
  const int n = n_grid;
  if (n_levels > n) throw validation_error("solve_spectrum: n_levels exceeds grid size");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 2.0 * kin + potential(i * h);
    const int j = (i + 1) % n;
    m(i, j) -= kin;
    m(j, i) -= kin;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return lowest(es.eigenvalues(), n_levels);
}

// Plane-wave (periodic) or sine (hard-wall) basis with `cutoff` retained modes.
std::vector<double> spectral_solve(const ContinuousLattice& lat, int cutoff, int n_levels) {
  const double l = lat.length();
  const double kin = lat.hbar * lat.hbar / (2.0 * lat.mass);
  const int nc = lat.n_cells;

  if (lat.boundary == Wall::periodic) {
    // basis e^{i k_j x}, k_j = 2 pi j / L, j in [-cutoff, cutoff];
    // V couples j and j +/- n_cells with amplitude V0/4
    const int n = 2 * cutoff + 1;
    if (n_levels > n) throw validation_error("solve_spectrum: n_levels exceeds basis size");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int r = 0; r < n; ++r) {
      const double k = 2.0 * kPi * (r - cutoff) / l;
      m(r, r) = kin * k * k + 0.5 * lat.V0;
      if (r + nc < n) {
        m(r, r + nc) += 0.25 * lat.V0;
        m(r + nc, r) += 0.25 * lat.V0;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return lowest(es.eigenvalues(), n_levels);
  }

  // basis sqrt(2/L) sin(n pi x / L), n = 1..cutoff;
  // <n|V|m> = V0/2 delta_nm + V0/4 delta_{|n-m|,2nc} - V0/4 delta_{n+m,2nc}
  const int n = cutoff;
  if (n_levels > n) throw validation_error("solve_spectrum: n_levels exceeds basis size");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int r = 1; r <= n; ++r) {
    const double k = kPi * r / l;
    m(r - 1, r - 1) = kin * k * k + 0.5 * lat.V0;
    if (r + 2 * nc <= n) {
      m(r - 1, r - 1 + 2 * nc) += 0.25 * lat.V0;
      m(r - 1 + 2 * nc, r - 1) += 0.25 * lat.V0;
    }
    const int partner = 2 * nc - r;
    if (partner >= 1 && partner <= n && partner > r) {
      m(r - 1, partner - 1) -= 0.25 * lat.V0;
      m(partner - 1, r - 1) -= 0.25 * lat.V0;
    } else if (partner == r) {
      m(r - 1, r - 1) -= 0.25 * lat.V0;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return lowest(es.eigenvalues(), n_levels);
}

double rel_change(const std::vector<double>& a, const std::vector<double>& b) {
  double scale = 0.0;
  for (double v : b) scale = std::max(scale, std::abs(v));
  scale = std::max(scale, 1e-12);
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d / scale;
}

std::vector<double> richardson(const std::vector<double>& coarse,
                               const std::vector<double>& fine) {
  // eliminates the O(h^2) term of the central-difference eigenvalues
  std::vector<double> out(coarse.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
  }
  return out;
}

}  // namespace

void ContinuousLattice::validate() const {
  if (period <= 0.0) throw validation_error("ContinuousLattice: period must be > 0");
  if (n_cells < 1) throw validation_error("ContinuousLattice: n_cells must be >= 1");
  if (mass <= 0.0 || hbar <= 0.0) {
    throw validation_error("ContinuousLattice: mass and hbar must be > 0");
  }
  if (grid_per_cell < 16) {
    throw validation_error("ContinuousLattice: grid_per_cell below the 16-point floor");
  }
}

std::vector<double> solve_spectrum(const ContinuousLattice& lat, int n_levels,
                                   SpectrumMethod method) {
  lat.validate();
  if (n_levels < 1) throw validation_error("solve_spectrum: n_levels must be >= 1");
  constexpr double kTol = 1e-6;

  if (method == SpectrumMethod::finite_difference) {
    // fd_solve error is C h^2 + O(h^4); Richardson over successive doublings
    // removes the leading term, then doubling again verifies stability.
    int g = lat.grid_per_cell;
    const int max_matrix = lat.boundary == Wall::hard_wall ? 16384 : 4096;
    std::vector<double> e_coarse = fd_solve(lat, g, n_levels);
    std::vector<double> e_fine = fd_solve(lat, 2 * g, n_levels);
    std::vector<double> extrap = richardson(e_coarse, e_fine);
    while (2 * g * lat.n_cells <= max_matrix) {
      g *= 2;
      e_coarse = std::move(e_fine);
      e_fine = fd_solve(lat, 2 * g, n_levels);
      std::vector<double> next = richardson(e_coarse, e_fine);
      if (rel_change(extrap, next) <= kTol) return next;
      extrap = std::move(next);
    }
    throw numerical_error("solve_spectrum: finite-difference refinement did not converge");
  }

  int cutoff = lat.boundary == Wall::periodic ? std::max(6 * lat.n_cells, 32)
                                              : std::max(8 * lat.n_cells, 32);
  std::vector<double> prev = spectral_solve(lat, cutoff, n_levels);
  for (int step = 0; step < 6; ++step) {
    cutoff *= 2;
    std::vector<double> next = spectral_solve(lat, cutoff, n_levels);
    if (rel_change(prev, next) <= kTol) return next;
    prev = std::move(next);
  }
  throw numerical_error("solve_spectrum: spectral refinement did not converge");
}

BandResult tunneling_from_band(std::span<const double> eigenvalues, int n_sites,
                               double lattice_constant, Wall grid) {
  if (n_sites < 2) throw validation_error("tunneling_from_band: n_sites must be >= 2");
  if (static_cast<int>(eigenvalues.size()) < n_sites) {
    throw validation_error("tunneling_from_band: need at least n_sites eigenvalues");
  }
  if (lattice_constant <= 0.0) {
    throw validation_error("tunneling_from_band: lattice constant must be > 0");
  }

  std::vector<double> band(eigenvalues.begin(), eigenvalues.begin() + n_sites);
  std::sort(band.begin(), band.end());

  if (static_cast<int>(eigenvalues.size()) > n_sites) {
    // require a spectral gap separating the band from what follows
    double max_spacing = 0.0;
    for (int i = 0; i + 1 < n_sites; ++i) {
      max_spacing = std::max(max_spacing, band[static_cast<std::size_t>(i + 1)] -
                                              band[static_cast<std::size_t>(i)]);
    }
    const double gap = eigenvalues[static_cast<std::size_t>(n_sites)] - band.back();
    if (gap <= 2.0 * max_spacing) {
      throw numerical_error("tunneling_from_band: no gap detected above the first band");
    }
  }

  // q grid cosines, descending so they pair with ascending energies
  std::vector<double> cosq(static_cast<std::size_t>(n_sites));
  if (grid == Wall::periodic) {
    for (int j = 0; j < n_sites; ++j) {
      cosq[static_cast<std::size_t>(j)] = std::cos(2.0 * kPi * j / n_sites);
    }
  } else {
    for (int j = 1; j <= n_sites; ++j) {
      cosq[static_cast<std::size_t>(j - 1)] = std::cos(kPi * j / (n_sites + 1));
    }
  }
  std::sort(cosq.begin(), cosq.end(), std::greater<>());

  const double width = band.back() - band.front();
  const double cos_span = cosq.front() - cosq.back();
  BandResult out;
  out.alpha = 0.5 * (band.back() + band.front());
  out.hop_J = width / (2.0 * cos_span);
  double ss = 0.0;
  for (int i = 0; i < n_sites; ++i) {
    const double pred = out.alpha - 2.0 * out.hop_J * cosq[static_cast<std::size_t>(i)];
    const double r = band[static_cast<std::size_t>(i)] - pred;
    ss += r * r;
  }
  out.band_fit_residual = std::sqrt(ss / n_sites) / std::max(width, 1e-300);
  out.eigenvalues = std::move(band);
  return out;
}

double recoil_energy(const ContinuousLattice& lat) {
  if (lat.period <= 0.0) throw validation_error("recoil_energy: period must be > 0");
  const double h = 2.0 * kPi * lat.hbar;
  const double lambda = 2.0 * lat.period;
  return h * h / (2.0 * lat.mass * lambda * lambda);
}

}  // namespace latkick
