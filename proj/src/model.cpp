#include "latkick/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace latkick {

void BoseHubbardModel::validate(int n_sites) const {
  if (hop_J < 0.0) throw validation_error("BoseHubbardModel: hop_J must be >= 0");
  if (lattice_constant <= 0.0) {
    throw validation_error("BoseHubbardModel: lattice_constant must be > 0");
  }
  if (!site_energies.empty() && static_cast<int>(site_energies.size()) != n_sites) {
    throw validation_error("BoseHubbardModel: site_energies has " +
                           std::to_string(site_energies.size()) + " entries for " +
                           std::to_string(n_sites) + " sites");
  }
}

std::vector<std::pair<int, int>> BoseHubbardModel::bonds(int n_sites) const {
  std::vector<std::pair<int, int>> b;
  b.reserve(static_cast<std::size_t>(n_sites));
  for (int i = 0; i + 1 < n_sites; ++i) b.emplace_back(i, i + 1);
  if (boundary == Boundary::periodic) b.emplace_back(n_sites - 1, 0);
  return b;
}

SparseHamiltonian::SparseHamiltonian(std::size_t dim, std::vector<std::int32_t> row_ptr,
                                     std::vector<std::int32_t> col_idx,
                                     std::vector<cplx> values)
    : dim_(dim), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != dim_ + 1 || col_idx_.size() != values_.size()) {
    throw validation_error("SparseHamiltonian: inconsistent CSR arrays");
  }
}

void SparseHamiltonian::apply(std::span<const cplx> x, std::span<cplx> y) const {
  if (x.size() != dim_ || y.size() != dim_) {
    throw validation_error("SparseHamiltonian::apply: dimension mismatch");
  }
  kernels::spmv(view(), x.data(), y.data());
}

double SparseHamiltonian::hermiticity_defect() const {
  // For each stored (i, j, v), find (j, i) by binary search and compare.
  double defect = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::int32_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const std::int32_t j = col_idx_[k];
      const auto begin = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(j)];
      const auto end = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(j) + 1];
      const auto it = std::lower_bound(begin, end, static_cast<std::int32_t>(i));
      cplx transposed = 0.0;
      if (it != end && *it == static_cast<std::int32_t>(i)) {
        transposed = values_[static_cast<std::size_t>(it - col_idx_.begin())];
      }
      defect = std::max(defect, std::abs(values_[static_cast<std::size_t>(k)] -
                                         std::conj(transposed)));
    }
  }
  return defect;
}

std::vector<SparseHamiltonian::Entry> SparseHamiltonian::entries() const {
  std::vector<Entry> out;
  out.reserve(values_.size());
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::int32_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      out.push_back({static_cast<std::int32_t>(i), col_idx_[k],
                     values_[static_cast<std::size_t>(k)]});
    }
  }
  return out;
}

SparseHamiltonian build_hamiltonian(const FockBasis& basis, const BoseHubbardModel& model) {
  const int M = basis.n_sites();
  model.validate(M);
  const std::size_t dim = basis.dim();
  const auto bonds = model.bonds(M);
  const auto x = basis.site_positions(model.lattice_constant);

  // Per-row scratch: diagonal plus one off-diagonal entry per directed hop.
  std::vector<std::int32_t> row_ptr(dim + 1, 0);
  std::vector<std::int32_t> cols;
  std::vector<cplx> vals;
  cols.reserve(dim * (2 * bonds.size() + 1));
  vals.reserve(dim * (2 * bonds.size() + 1));

  std::vector<std::uint16_t> hopped(static_cast<std::size_t>(M));
  std::vector<std::pair<std::int32_t, cplx>> row;
  // Column convention: row entries of H are <s|H|t>, assembled by acting on
  // the column state t and ranking the result. Since H is Hermitian and the
  // hop amplitudes are real, assembling row-wise with a_j -> a_i transfers
  // gives the same entry set.
  for (std::size_t s = 0; s < dim; ++s) {
    row.clear();
    auto occ = basis.occupation(s);

    double diag = 0.0;
    for (int i = 0; i < M; ++i) {
      const double n = occ[static_cast<std::size_t>(i)];
      diag += 0.5 * model.onsite_U * n * (n - 1.0);
      diag += model.tilt_gamma * x[static_cast<std::size_t>(i)] * n;
      if (!model.site_energies.empty()) {
        diag += model.site_energies[static_cast<std::size_t>(i)] * n;
      }
    }
    row.emplace_back(static_cast<std::int32_t>(s), diag);

    if (model.hop_J != 0.0) {
      for (auto [i, j] : bonds) {
        // -J a_i^dag a_j and -J a_j^dag a_i applied to |occ>
        for (auto [from, to] : {std::pair{j, i}, std::pair{i, j}}) {
          const int nf = occ[static_cast<std::size_t>(from)];
          if (nf == 0) continue;
          std::copy(occ.begin(), occ.end(), hopped.begin());
          hopped[static_cast<std::size_t>(from)] = static_cast<std::uint16_t>(nf - 1);
          const int nt = ++hopped[static_cast<std::size_t>(to)];
          const double w = std::sqrt(static_cast<double>(nf) * static_cast<double>(nt));
          row.emplace_back(static_cast<std::int32_t>(basis.index_of(hopped)),
                           -model.hop_J * w);
        }
      }
    }

    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    // merge duplicates (a 2-site periodic ring doubles its single bond)
    for (const auto& [c, v] : row) {
      if (cols.size() > static_cast<std::size_t>(row_ptr[s]) && cols.back() == c) {
        vals.back() += v;
      } else {
        cols.push_back(c);
        vals.push_back(v);
      }
    }
    row_ptr[s + 1] = static_cast<std::int32_t>(cols.size());
  }

  return SparseHamiltonian(dim, std::move(row_ptr), std::move(cols), std::move(vals));
}

std::vector<cplx> apply_hamiltonian(const SparseHamiltonian& h, std::span<const cplx> v) {
  if (v.size() != h.dim()) {
    throw validation_error("apply_hamiltonian: vector length " + std::to_string(v.size()) +
                           " != operator dimension " + std::to_string(h.dim()));
  }
  std::vector<cplx> y(h.dim());
  h.apply(v, y);
  return y;
}

}  // namespace latkick
