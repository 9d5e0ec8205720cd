#include "latkick/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "latkick/kernels.hpp"

namespace latkick {

namespace {

using kernels::axpy;
using kernels::dotc;
using kernels::nrm2;
using kernels::scal;

// Deterministic start vector: fully specified mt19937_64 stream mapped to
// uniform amplitudes, identical on every platform.
std::vector<cplx> deterministic_start(std::size_t dim) {
  std::mt19937_64 rng(0x6c61746bULL);
  std::vector<cplx> v(dim);
  auto next = [&rng]() {
    return (static_cast<double>(rng() >> 11) * 0x1.0p-53) * 2.0 - 1.0;
  };
  for (auto& a : v) {
    const double re = next();
    const double im = next();
    a = {re, im};
  }
  const double n = nrm2(v.data(), dim);
  scal(1.0 / n, v.data(), dim);
  return v;
}

struct KrylovBlock {
  std::vector<std::vector<cplx>> v;  // orthonormal basis vectors
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples v[j] and v[j+1]
  bool exhausted = false;    // happy breakdown: span is H-invariant
};

// Lanczos recurrence with full reorthogonalization from start vector `v0`.
KrylovBlock build_krylov(const SparseHamiltonian& h, const std::vector<cplx>& v0,
                         int max_vectors) {
  const std::size_t dim = h.dim();
  KrylovBlock blk;
  blk.v.push_back(v0);
  std::vector<cplx> w(dim);
  double scale = 0.0;
  for (int j = 0; j < max_vectors; ++j) {
    h.apply(blk.v[static_cast<std::size_t>(j)], w);
    const double a = dotc(blk.v[static_cast<std::size_t>(j)].data(), w.data(), dim).real();
    blk.alpha.push_back(a);
    scale = std::max({scale, std::abs(a), nrm2(w.data(), dim)});
    if (j + 1 == max_vectors) break;
    axpy(-a, blk.v[static_cast<std::size_t>(j)].data(), w.data(), dim);
    if (j > 0) {
      axpy(-blk.beta[static_cast<std::size_t>(j - 1)],
           blk.v[static_cast<std::size_t>(j - 1)].data(), w.data(), dim);
    }
    // full reorthogonalization, two passes
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& vi : blk.v) {
        const cplx overlap = dotc(vi.data(), w.data(), dim);
        axpy(-overlap, vi.data(), w.data(), dim);
      }
    }
    const double b = nrm2(w.data(), dim);
    if (b <= 1e-13 * std::max(scale, 1.0)) {
      blk.exhausted = true;
      break;
    }
    blk.beta.push_back(b);
    std::vector<cplx> vj(dim);
    for (std::size_t i = 0; i < dim; ++i) vj[i] = w[i] / b;
    blk.v.push_back(std::move(vj));
  }
  return blk;
}

void fix_phase(std::vector<cplx>& v) {
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double m = std::abs(v[i]);
    if (m > best_mag + 1e-15) {
      best_mag = m;
      best = i;
    }
  }
  if (best_mag <= 0.0) return;
  scal(std::conj(v[best]) / best_mag, v.data(), v.size());
}

}  // namespace

GroundStateResult ground_state(const SparseHamiltonian& h,
                               std::shared_ptr<const FockBasis> basis,
                               const LanczosOptions& opts) {
  const std::size_t dim = h.dim();
  if (basis && basis->dim() != dim) {
    throw validation_error("ground_state: basis dimension != operator dimension");
  }
  const int m = static_cast<int>(std::min<std::size_t>(
      dim, static_cast<std::size_t>(std::max(2, opts.block_size))));

  std::vector<cplx> v0 = deterministic_start(dim);
  double energy = 0.0;
  double residual = 0.0;
  std::vector<cplx> hv(dim);

  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    KrylovBlock blk = build_krylov(h, v0, m);
    const int k = static_cast<int>(blk.alpha.size());
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(blk.alpha.data(), k);
    Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(
        blk.beta.data(), static_cast<int>(blk.beta.size()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub);
    energy = es.eigenvalues()(0);
    const Eigen::VectorXd y = es.eigenvectors().col(0);

    std::vector<cplx> ritz(dim, 0.0);
    for (int j = 0; j < k; ++j) {
      axpy(y(j), blk.v[static_cast<std::size_t>(j)].data(), ritz.data(), dim);
    }
    const double rn = nrm2(ritz.data(), dim);
    scal(1.0 / rn, ritz.data(), dim);

    h.apply(ritz, hv);
    axpy(-energy, ritz.data(), hv.data(), dim);
    residual = nrm2(hv.data(), dim);
    if (residual <= opts.tol || blk.exhausted) {
      if (residual > opts.tol) {
        // invariant subspace but above tolerance: operator too rough
        throw numerical_error("ground_state: Lanczos stalled at residual " +
                              std::to_string(residual));
      }
      fix_phase(ritz);
      const double n = nrm2(ritz.data(), dim);
      scal(1.0 / n, ritz.data(), dim);
      return {ManyBodyState(std::move(basis), std::move(ritz)), energy, residual,
              restart};
    }
    v0 = std::move(ritz);
  }
  throw numerical_error("ground_state: no convergence after " +
                        std::to_string(opts.max_restarts) + " restarts (residual " +
                        std::to_string(residual) + ")");
}

std::vector<FamilyPoint> ground_state_family(std::shared_ptr<const FockBasis> basis,
                                             const BoseHubbardModel& base_model,
                                             std::span<const double> u_list,
                                             const LanczosOptions& opts) {
  if (u_list.empty()) throw validation_error("ground_state_family: emptyU list");
  for (std::size_t i = 1; i < u_list.size(); ++i) {
    if (u_list[i] < u_list[i - 1]) {
      throw validation_error("ground_state_family: U list must be ascending");
    }
  }
  std::vector<FamilyPoint> out;
  out.reserve(u_list.size());
  for (double u : u_list) {
    BoseHubbardModel m = base_model;
    m.onsite_U = u;
    auto h = build_hamiltonian(*basis, m);
    auto gs = ground_state(h, basis, opts);
    const auto spectrum = natural_spectrum(one_body_rdm(gs.state));
    out.push_back({u, std::move(gs.state), gs.energy, spectrum.condensate_fraction});
  }
  return out;
}

ManyBodyState apply_phase_imprint(const ManyBodyState& state,
                                  std::span<const double> phases) {
  state.require_normalized();
  const FockBasis& b = state.basis();
  if (static_cast<int>(phases.size()) != b.n_sites()) {
    throw validation_error("apply_phase_imprint: need one phase per site");
  }
  std::vector<cplx> amp(state.amplitudes().begin(), state.amplitudes().end());
  for (std::size_t s = 0; s < b.dim(); ++s) {
    auto occ = b.occupation(s);
    double phase = 0.0;
    for (int j = 0; j < b.n_sites(); ++j) {
      phase += phases[static_cast<std::size_t>(j)] * occ[static_cast<std::size_t>(j)];
    }
    amp[s] *= cplx(std::cos(phase), std::sin(phase));
  }
  return ManyBodyState(state.basis_ptr(), std::move(amp), state.time());
}

ManyBodyState apply_tilt_pulse(const ManyBodyState& state, const BoseHubbardModel& model,
                               double gamma, double duration, int steps,
                               double tolerance) {
  if (duration <= 0.0) throw validation_error("apply_tilt_pulse: duration must be > 0");
  if (steps < 1) throw validation_error("apply_tilt_pulse: steps must be >= 1");
  BoseHubbardModel tilted = model;
  tilted.tilt_gamma = gamma;
  const auto h = build_hamiltonian(state.basis(), tilted);
  ManyBodyState cur = state;
  const double dt = duration / steps;
  for (int i = 0; i < steps; ++i) cur = propagate(cur, h, dt, tolerance);
  return cur;
}

ManyBodyState propagate(const ManyBodyState& state, const SparseHamiltonian& h,
                        double duration, double tolerance) {
  const std::size_t dim = h.dim();
  if (state.amplitudes().size() != dim) {
    throw validation_error("propagate: state/operator dimension mismatch");
  }
  if (duration < 0.0) throw validation_error("propagate: duration must be >= 0");
  if (duration == 0.0) return state;
  if (tolerance <= 0.0) throw validation_error("propagate: tolerance must be > 0");

  constexpr int kMaxKrylov = 30;
  const int m = static_cast<int>(std::min<std::size_t>(dim, kMaxKrylov));
  const double dt_min = duration * 1e-12;

  std::vector<cplx> psi(state.amplitudes().begin(), state.amplitudes().end());
  double remaining = duration;

  while (remaining > 0.0) {
    // Krylov block from the current state
    std::vector<cplx> v0 = psi;
    const double v0n = nrm2(v0.data(), dim);
    scal(1.0 / v0n, v0.data(), dim);
    KrylovBlock blk = build_krylov(h, v0, m);
    const int k = static_cast<int>(blk.alpha.size());

    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(blk.alpha.data(), k);
    Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(
        blk.beta.data(), static_cast<int>(blk.beta.size()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub);
    const Eigen::VectorXd& theta = es.eigenvalues();
    const Eigen::MatrixXd& s = es.eigenvectors();
    const Eigen::VectorXd c = s.row(0).transpose();  // S^T e_1

    // u(dt) = S diag(exp(-i theta dt)) S^T e_1 in the Krylov basis
    auto solve_u = [&](double dt) {
      Eigen::VectorXcd phases(k);
      for (int i = 0; i < k; ++i) {
        phases(i) = std::polar(c(i), -theta(i) * dt);
      }
      return (s * phases).eval();
    };

    // a span that is H-invariant (breakdown) or complete propagates exactly
    const bool exact = blk.exhausted || static_cast<std::size_t>(k) == dim;
    double dt = remaining;
    Eigen::VectorXcd u;
    while (true) {
      u = solve_u(dt);
      // leakage into the last Krylov direction bounds the local error
      const double err = exact ? 0.0 : std::abs(u(k - 1));
      if (err <= tolerance * (dt / duration)) break;
      dt *= 0.5;
      if (dt < dt_min) {
        throw numerical_error("propagate: step size underflow (pathological operator norm)");
      }
    }

    std::fill(psi.begin(), psi.end(), cplx{0.0, 0.0});
    for (int j = 0; j < k; ++j) {
      axpy(u(j) * v0n, blk.v[static_cast<std::size_t>(j)].data(), psi.data(), dim);
    }
    remaining -= dt;
  }

  ManyBodyState out(state.basis_ptr(), std::move(psi), state.time() + duration);
  if (std::abs(out.norm() - state.norm()) > 1e-9) {
    throw numerical_error("propagate: norm drift exceeded 1e-9");
  }
  return out;
}

void QuenchProtocol::validate() const {
  if (total_time <= 0.0) throw validation_error("QuenchProtocol: total_time must be > 0");
  if (dt_sample <= 0.0) throw validation_error("QuenchProtocol: dt_sample must be > 0");
  if (propagator_tolerance <= 0.0) {
    throw validation_error("QuenchProtocol: propagator_tolerance must be > 0");
  }
  if (boost.kind == BoostSpec::Kind::tilt_pulse) {
    if (boost.duration <= 0.0) {
      throw validation_error("QuenchProtocol: tilt pulse duration must be > 0");
    }
    if (boost.duration >= total_time / 10.0) {
      throw validation_error(
          "QuenchProtocol: tilt pulse must be brief (duration < total_time / 10)");
    }
  }
}

TimeSeries run_quench(std::shared_ptr<const FockBasis> basis, const BoseHubbardModel& model,
                      const ManyBodyState& initial, const QuenchProtocol& protocol) {
  protocol.validate();
  model.validate(basis->n_sites());
  initial.require_normalized();

  BoseHubbardModel probe = model;
  probe.onsite_U = protocol.probe_U;
  probe.tilt_gamma = 0.0;

  TimeSeries ts;
  ts.meta.model = probe;
  ts.meta.protocol = protocol;
  ts.meta.n_atoms = basis->n_atoms();
  ts.meta.n_sites = basis->n_sites();

  // the probe diagnoses stationary states; warn when the input already carries
  // a current
  {
    BoseHubbardModel prep = model;
    prep.tilt_gamma = 0.0;
    ts.meta.initial_current = current_expectation(initial, prep);
    const double scale = std::max(model.hop_J * model.lattice_constant, 1e-300);
    if (std::abs(ts.meta.initial_current) > 1e-8 * scale) {
      ts.meta.stationarity_warning = true;
      std::fprintf(stderr,
                   "latkick: warning: initial state carries current %.3e (J*a units); "
                   "the probe assumes a stationary input\n",
                   ts.meta.initial_current / scale);
    }
  }

  // momentum boost
  ManyBodyState psi = initial;
  const auto x = basis->site_positions(model.lattice_constant);
  switch (protocol.boost.kind) {
    case BoostSpec::Kind::none:
      break;
    case BoostSpec::Kind::imprint_step: {
      std::vector<double> phases(x.size());
      for (std::size_t j = 0; j < phases.size(); ++j) {
        phases[j] = protocol.boost.delta_phi * static_cast<double>(j);
      }
      psi = apply_phase_imprint(psi, phases);
      break;
    }
    case BoostSpec::Kind::imprint_gradient: {
      std::vector<double> phases(x.size());
      for (std::size_t j = 0; j < phases.size(); ++j) {
        phases[j] = protocol.boost.gradient_k * x[j];
      }
      psi = apply_phase_imprint(psi, phases);
      break;
    }
    case BoostSpec::Kind::tilt_pulse:
      psi = apply_tilt_pulse(psi, probe, protocol.boost.gamma, protocol.boost.duration,
                             protocol.boost.tilt_steps, protocol.propagator_tolerance);
      break;
  }
  psi.set_time(0.0);

  const auto h_probe = build_hamiltonian(*basis, probe);
  const auto n_samples =
      static_cast<std::size_t>(std::floor(protocol.total_time / protocol.dt_sample + 1e-9)) + 1;

  ts.times.reserve(n_samples);
  ts.mean_x.reserve(n_samples);
  ts.current.reserve(n_samples);
  ts.densities.reserve(n_samples);

  for (std::size_t i = 0; i < n_samples; ++i) {
    ts.times.push_back(static_cast<double>(i) * protocol.dt_sample);
    auto dens = site_densities(psi);
    double mx = 0.0;
    for (std::size_t j = 0; j < dens.size(); ++j) mx += x[j] * dens[j];
    ts.mean_x.push_back(mx / (basis->n_atoms() * model.lattice_constant));
    ts.current.push_back(current_expectation(psi, probe));
    ts.densities.push_back(std::move(dens));
    if (i + 1 < n_samples) {
      psi = propagate(psi, h_probe, protocol.dt_sample, protocol.propagator_tolerance);
    }
  }
  return ts;
}

}  // namespace latkick
