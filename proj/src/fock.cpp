#include "latkick/fock.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "latkick/kernels.hpp"
#include "latkick/model.hpp"

namespace latkick {

namespace {

constexpr std::uint64_t kRankOverflow = ~std::uint64_t{0};

// binomial(n, k) saturating at kRankOverflow.
std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    // r * (n - k + i) may overflow; check before multiplying
    std::uint64_t f = static_cast<std::uint64_t>(n - k + i);
    if (r > kRankOverflow / f) return kRankOverflow;
    r = r * f / static_cast<std::uint64_t>(i);
  }
  return r;
}

}  // namespace

std::size_t FockBasis::dimension(int n_atoms, int n_sites, std::size_t dim_cap) {
  if (n_atoms < 1) throw validation_error("FockBasis: n_atoms must be >= 1");
  if (n_sites < 2) throw validation_error("FockBasis: n_sites must be >= 2");
  std::uint64_t d = binomial(n_atoms + n_sites - 1, n_sites - 1);
  if (d == kRankOverflow || d > dim_cap) {
    throw dimension_error("FockBasis: dimension for N=" + std::to_string(n_atoms) +
                          ", M=" + std::to_string(n_sites) + " exceeds cap " +
                          std::to_string(dim_cap));
  }
  return static_cast<std::size_t>(d);
}

FockBasis::FockBasis(int n_atoms, int n_sites, std::size_t dim_cap)
    : n_atoms_(n_atoms), n_sites_(n_sites), dim_(dimension(n_atoms, n_sites, dim_cap)) {
  const int M = n_sites_;
  const int N = n_atoms_;

  // Enumerate in descending lexicographic order, starting from (N, 0, ..., 0).
  occ_.reserve(dim_ * static_cast<std::size_t>(M));
  std::vector<std::uint16_t> v(static_cast<std::size_t>(M), 0);
  v[0] = static_cast<std::uint16_t>(N);
  while (true) {
    occ_.insert(occ_.end(), v.begin(), v.end());
    if (v[static_cast<std::size_t>(M - 1)] == N) break;
    int k = M - 2;
    while (v[static_cast<std::size_t>(k)] == 0) --k;
    --v[static_cast<std::size_t>(k)];
    int partial = 0;
    for (int i = 0; i <= k; ++i) partial += v[static_cast<std::size_t>(i)];
    v[static_cast<std::size_t>(k + 1)] = static_cast<std::uint16_t>(N - partial);
    std::fill(v.begin() + k + 2, v.end(), std::uint16_t{0});
  }

  // rank_prefix_[m * (N+1) + r] = sum_{r' <= r} binomial(r' + m - 1, m - 1),
  // the number of states of at most r atoms on m sites. Used by index_of.
  rank_prefix_.assign(static_cast<std::size_t>(M) * (N + 1), 0);
  for (int m = 1; m < M; ++m) {
    std::uint64_t acc = 0;
    for (int r = 0; r <= N; ++r) {
      acc += binomial(r + m - 1, m - 1);
      rank_prefix_[static_cast<std::size_t>(m) * (N + 1) + r] = acc;
    }
  }
}

std::size_t FockBasis::index_of(std::span<const std::uint16_t> occ) const {
  std::uint64_t idx = 0;
  int remaining = n_atoms_;
  for (int s = 0; s < n_sites_ - 1; ++s) {
    const int m_rest = n_sites_ - 1 - s;  // sites to the right of s
    const int c = occ[static_cast<std::size_t>(s)];
    // states whose occupation at s exceeds c come first
    if (c < remaining) {
      idx += rank_prefix_[static_cast<std::size_t>(m_rest) * (n_atoms_ + 1) +
                          (remaining - c - 1)];
    }
    remaining -= c;
  }
  return static_cast<std::size_t>(idx);
}

std::vector<double> FockBasis::site_positions(double lattice_constant) const {
  std::vector<double> x(static_cast<std::size_t>(n_sites_));
  for (int i = 0; i < n_sites_; ++i) {
    x[static_cast<std::size_t>(i)] =
        (i - 0.5 * (n_sites_ - 1)) * lattice_constant;
  }
  return x;
}

std::shared_ptr<const FockBasis> build_basis(int n_atoms, int n_sites, std::size_t dim_cap) {
  return std::make_shared<const FockBasis>(n_atoms, n_sites, dim_cap);
}

ManyBodyState::ManyBodyState(std::shared_ptr<const FockBasis> basis,
                             std::vector<cplx> amplitudes, double time)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)), time_(time) {
  if (!basis_) throw validation_error("ManyBodyState: null basis");
  if (amplitudes_.size() != basis_->dim()) {
    throw validation_error("ManyBodyState: amplitude vector length " +
                           std::to_string(amplitudes_.size()) + " != basis dimension " +
                           std::to_string(basis_->dim()));
  }
}

double ManyBodyState::norm() const {
  return kernels::nrm2(amplitudes_.data(), amplitudes_.size());
}

void ManyBodyState::require_normalized(double tol) const {
  const double n = norm();
  if (std::abs(n - 1.0) > tol) {
    throw validation_error("ManyBodyState: norm " + std::to_string(n) +
                           " deviates from 1 beyond tolerance");
  }
}

ManyBodyState make_superfluid_state(std::shared_ptr<const FockBasis> basis) {
  const FockBasis& b = *basis;
  const int N = b.n_atoms();
  const int M = b.n_sites();
  // Coefficient of |n_1...n_M> in (sum_i a_i^dag)^N |0> after normalization:
  // sqrt(N! / (n_1! ... n_M!)) / M^(N/2). Evaluated with lgamma for stability.
  const double lgN = std::lgamma(N + 1.0);
  const double lnM = std::log(static_cast<double>(M));
  std::vector<cplx> amp(b.dim());
  for (std::size_t i = 0; i < b.dim(); ++i) {
    auto occ = b.occupation(i);
    double s = lgN;
    for (int j = 0; j < M; ++j) s -= std::lgamma(occ[static_cast<std::size_t>(j)] + 1.0);
    amp[i] = std::exp(0.5 * s - 0.5 * N * lnM);
  }
  ManyBodyState state(std::move(basis), std::move(amp));
  // lgamma rounding leaves the norm a few ulp off; snap it back
  kernels::scal(1.0 / state.norm(), state.amplitudes().data(), state.amplitudes().size());
  return state;
}

ManyBodyState make_mott_state(std::shared_ptr<const FockBasis> basis,
                              std::span<const std::uint16_t> filling) {
  const FockBasis& b = *basis;
  if (static_cast<int>(filling.size()) != b.n_sites()) {
    throw validation_error("make_mott_state: filling has " + std::to_string(filling.size()) +
                           " sites, basis has " + std::to_string(b.n_sites()));
  }
  int total = 0;
  for (auto n : filling) total += n;
  if (total != b.n_atoms()) {
    throw validation_error("make_mott_state: filling sums to " + std::to_string(total) +
                           ", basis holds " + std::to_string(b.n_atoms()) + " atoms");
  }
  std::vector<cplx> amp(b.dim(), 0.0);
  amp[b.index_of(filling)] = 1.0;
  return ManyBodyState(std::move(basis), std::move(amp));
}

OneBodyRDM one_body_rdm(const ManyBodyState& state) {
  state.require_normalized();
  const FockBasis& b = state.basis();
  const int M = b.n_sites();
  auto amp = state.amplitudes();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(M, M);

  std::vector<std::uint16_t> hopped(static_cast<std::size_t>(M));
  for (std::size_t s = 0; s < b.dim(); ++s) {
    const cplx c = amp[s];
    if (c == cplx{0.0, 0.0}) continue;
    auto occ = b.occupation(s);
    for (int j = 0; j < M; ++j) {
      const int nj = occ[static_cast<std::size_t>(j)];
      if (nj == 0) continue;
      rho(j, j) += std::conj(c) * c * static_cast<double>(nj);
      // i < j upper triangle; lower filled by conjugation below
      for (int i = 0; i < j; ++i) {
        std::copy(occ.begin(), occ.end(), hopped.begin());
        hopped[static_cast<std::size_t>(j)] = static_cast<std::uint16_t>(nj - 1);
        const int ni = ++hopped[static_cast<std::size_t>(i)];
        const double w = std::sqrt(static_cast<double>(nj) * static_cast<double>(ni));
        rho(i, j) += std::conj(amp[b.index_of(hopped)]) * c * w;
      }
    }
  }
  for (int j = 0; j < M; ++j) {
    rho(j, j) = cplx(rho(j, j).real(), 0.0);
    for (int i = 0; i < j; ++i) rho(j, i) = std::conj(rho(i, j));
  }
  return {std::move(rho), b.n_atoms()};
}

NaturalSpectrum natural_spectrum(const OneBodyRDM& rdm) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rdm.matrix, Eigen::EigenvaluesOnly);
  Eigen::VectorXd occ = solver.eigenvalues().reverse();
  NaturalSpectrum out;
  out.occupations = std::move(occ);
  out.condensate_fraction = out.occupations(0) / static_cast<double>(rdm.n_atoms);
  return out;
}

std::vector<double> site_densities(const ManyBodyState& state) {
  state.require_normalized();
  const FockBasis& b = state.basis();
  const int M = b.n_sites();
  auto amp = state.amplitudes();
  std::vector<double> dens(static_cast<std::size_t>(M), 0.0);
  for (std::size_t s = 0; s < b.dim(); ++s) {
    const double p = std::norm(amp[s]);
    if (p == 0.0) continue;
    auto occ = b.occupation(s);
    for (int j = 0; j < M; ++j) dens[static_cast<std::size_t>(j)] += p * occ[static_cast<std::size_t>(j)];
  }
  return dens;
}

double mean_position(const ManyBodyState& state, double lattice_constant) {
  const auto dens = site_densities(state);
  const auto x = state.basis().site_positions(lattice_constant);
  double m = 0.0;
  for (std::size_t i = 0; i < dens.size(); ++i) m += x[i] * dens[i];
  return m / state.basis().n_atoms();
}

double current_expectation(const ManyBodyState& state, const BoseHubbardModel& model) {
  state.require_normalized();
  const FockBasis& b = state.basis();
  const int M = b.n_sites();
  model.validate(M);
  auto amp = state.amplitudes();
  const auto bonds = model.bonds(M);

  // <J> = hop_J * a * sum_bonds 2 Im <a_{i+1}^dag a_i>
  cplx hop_sum = 0.0;  // sum over bonds of <a_{i+1}^dag a_i>
  std::vector<std::uint16_t> hopped(static_cast<std::size_t>(M));
  for (std::size_t s = 0; s < b.dim(); ++s) {
    const cplx c = amp[s];
    if (c == cplx{0.0, 0.0}) continue;
    auto occ = b.occupation(s);
    for (auto [i, next] : bonds) {
      const int ni = occ[static_cast<std::size_t>(i)];
      if (ni == 0) continue;
      std::copy(occ.begin(), occ.end(), hopped.begin());
      hopped[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(ni - 1);
      const int nn = ++hopped[static_cast<std::size_t>(next)];
      const double w = std::sqrt(static_cast<double>(ni) * static_cast<double>(nn));
      hop_sum += std::conj(amp[b.index_of(hopped)]) * c * w;
    }
  }
  return model.hop_J * model.lattice_constant * 2.0 * hop_sum.imag();
}

double state_fidelity(const ManyBodyState& a, const ManyBodyState& b) {
  if (a.basis_ptr().get() != b.basis_ptr().get() &&
      (a.basis().n_atoms() != b.basis().n_atoms() ||
       a.basis().n_sites() != b.basis().n_sites())) {
    throw validation_error("state_fidelity: states live in different bases");
  }
  if (a.amplitudes().size() != b.amplitudes().size()) {
    throw validation_error("state_fidelity: dimension mismatch");
  }
  return std::abs(kernels::dotc(a.amplitudes().data(), b.amplitudes().data(),
                                a.amplitudes().size()));
}

}  // namespace latkick
