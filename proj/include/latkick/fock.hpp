#pragma once

// Occupation-number basis for N bosons on M sites, many-body state container,
// reference superfluid/Mott states, and static observables (one-body RDM,
// natural occupations, densities, mean position, current, fidelity).

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "latkick/errors.hpp"

namespace latkick {

struct BoseHubbardModel;  // model.hpp

using cplx = std::complex<double>;

inline constexpr std::size_t kDefaultBasisCap = 5'000'000;

/// Occupation-number basis, ordered lexicographically descending
/// ((N,0,...,0) first, (0,...,0,N) last). Immutable after construction.
class FockBasis {
 public:
  FockBasis(int n_atoms, int n_sites, std::size_t dim_cap);

  int n_atoms() const { return n_atoms_; }
  int n_sites() const { return n_sites_; }
  std::size_t dim() const { return dim_; }

  /// Occupation vector of basis state i.
  std::span<const std::uint16_t> occupation(std::size_t i) const {
    return {occ_.data() + i * static_cast<std::size_t>(n_sites_),
            static_cast<std::size_t>(n_sites_)};
  }

  /// Position of an occupation vector in the basis ordering (combinatorial
  /// ranking; no hash table).
  std::size_t index_of(std::span<const std::uint16_t> occ) const;

  /// Basis size binomial(N+M-1, M-1), without building anything.
  /// Throws dimension_error if it exceeds `dim_cap`.
  static std::size_t dimension(int n_atoms, int n_sites,
                               std::size_t dim_cap = kDefaultBasisCap);

  /// Site coordinates x_i = (i - (M-1)/2) * a, centered so they sum to zero.
  std::vector<double> site_positions(double lattice_constant) const;

 private:
  int n_atoms_;
  int n_sites_;
  std::size_t dim_;
  std::vector<std::uint16_t> occ_;           // dim * n_sites, row-major
  std::vector<std::uint64_t> rank_prefix_;   // prefix sums for index_of
};

std::shared_ptr<const FockBasis> build_basis(int n_atoms, int n_sites,
                                             std::size_t dim_cap = kDefaultBasisCap);

/// Normalized complex amplitude vector over a FockBasis, tagged with the
/// physical time it corresponds to.
class ManyBodyState {
 public:
  ManyBodyState(std::shared_ptr<const FockBasis> basis, std::vector<cplx> amplitudes,
                double time = 0.0);

  const FockBasis& basis() const { return *basis_; }
  const std::shared_ptr<const FockBasis>& basis_ptr() const { return basis_; }
  std::span<const cplx> amplitudes() const { return amplitudes_; }
  std::span<cplx> amplitudes() { return amplitudes_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  double norm() const;
  /// Throws validation_error unless the norm is 1 within `tol`.
  void require_normalized(double tol = 1e-10) const;

 private:
  std::shared_ptr<const FockBasis> basis_;
  std::vector<cplx> amplitudes_;
  double time_;
};

/// (sum_i a_i^dag)^N |0> normalized: every site shares one condensate orbital.
ManyBodyState make_superfluid_state(std::shared_ptr<const FockBasis> basis);

/// Single Fock state |n_1 ... n_M>; `filling` must sum to N.
ManyBodyState make_mott_state(std::shared_ptr<const FockBasis> basis,
                              std::span<const std::uint16_t> filling);

/// M x M matrix <a_i^dag a_j>; Hermitian, trace N, positive semidefinite.
struct OneBodyRDM {
  Eigen::MatrixXcd matrix;
  int n_atoms = 0;
};

/// Natural occupations (descending) and condensate fraction n_1/N.
struct NaturalSpectrum {
  Eigen::VectorXd occupations;
  double condensate_fraction = 0.0;
};

OneBodyRDM one_body_rdm(const ManyBodyState& state);
NaturalSpectrum natural_spectrum(const OneBodyRDM& rdm);

/// Per-site expectation values <n_i>; non-negative, sums to N.
std::vector<double> site_densities(const ManyBodyState& state);

/// (1/N) sum_i x_i <n_i> with centered site coordinates, in length units.
double mean_position(const ManyBodyState& state, double lattice_constant = 1.0);

/// <J> for J = (hop_J * a / i) * sum_bonds (a_{i+1}^dag a_i - a_i^dag a_{i+1}),
/// hbar = 1. The bond list follows the model's boundary condition.
double current_expectation(const ManyBodyState& state, const BoseHubbardModel& model);

/// |<a|b>|; throws validation_error if the states use different bases.
double state_fidelity(const ManyBodyState& a, const ManyBodyState& b);

}  // namespace latkick
