#pragma once

// Bose-Hubbard Hamiltonian assembly as a sparse CSR operator over a FockBasis:
// H = -J sum_bonds (a_{i+1}^dag a_i + h.c.) + (U/2) sum_i n_i(n_i - 1)
//     + sum_i (eps_i + gamma * x_i) n_i            (hbar = 1 units)

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "latkick/fock.hpp"
#include "latkick/kernels.hpp"

namespace latkick {

enum class Boundary { open, periodic };

struct BoseHubbardModel {
  double hop_J = 1.0;                 // energy (rad/s with hbar = 1)
  double onsite_U = 0.0;              // energy
  std::vector<double> site_energies;  // empty means all zero
  double tilt_gamma = 0.0;            // energy per length
  double lattice_constant = 1.0;      // length
  Boundary boundary = Boundary::open;

  /// Throws validation_error on bad parameters (J < 0, a <= 0,
  /// site_energies length mismatch).
  void validate(int n_sites) const;

  /// Bond list (i, i+1) pairs; periodic adds the wrap bond (M-1, 0).
  std::vector<std::pair<int, int>> bonds(int n_sites) const;
};

/// Hermitian number-conserving sparse operator in CSR form. Entries are
/// stored row-major with ascending columns, so the layout is deterministic.
class SparseHamiltonian {
 public:
  SparseHamiltonian(std::size_t dim, std::vector<std::int32_t> row_ptr,
                    std::vector<std::int32_t> col_idx, std::vector<cplx> values);

  std::size_t dim() const { return dim_; }
  std::size_t nnz() const { return values_.size(); }

  kernels::CsrView view() const {
    return {row_ptr_.data(), col_idx_.data(), values_.data(),
            static_cast<std::int32_t>(dim_)};
  }

  /// y = H x through the dispatched kernels.
  void apply(std::span<const cplx> x, std::span<cplx> y) const;

  /// Max |H_ij - conj(H_ji)| over stored entries.
  double hermiticity_defect() const;

  struct Entry {
    std::int32_t row;
    std::int32_t col;
    cplx value;
  };
  /// Stored entries in deterministic (row-major, ascending column) order.
  std::vector<Entry> entries() const;

 private:
  std::size_t dim_;
  std::vector<std::int32_t> row_ptr_;
  std::vector<std::int32_t> col_idx_;
  std::vector<cplx> values_;
};

SparseHamiltonian build_hamiltonian(const FockBasis& basis, const BoseHubbardModel& model);

/// y = H v; throws validation_error on dimension mismatch.
std::vector<cplx> apply_hamiltonian(const SparseHamiltonian& h, std::span<const cplx> v);

}  // namespace latkick
