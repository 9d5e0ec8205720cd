#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "latkick/analysis.hpp"
#include "latkick/dynamics.hpp"
#include "support/oracles.hpp"

using namespace latkick;

namespace {

constexpr double kPi = std::numbers::pi;

// condensate of a given single-particle orbital: (sum_j u_j a_j^dag)^N |0>
ManyBodyState condensate_of_orbital(std::shared_ptr<const FockBasis> basis,
                                    const Eigen::VectorXcd& orbital) {
  const FockBasis& b = *basis;
  std::vector<cplx> amp(b.dim());
  const double lgn = std::lgamma(b.n_atoms() + 1.0);
  for (std::size_t s = 0; s < b.dim(); ++s) {
    auto occ = b.occupation(s);
    cplx prod = 1.0;
    double lg = lgn;
    for (int j = 0; j < b.n_sites(); ++j) {
      const int nj = occ[static_cast<std::size_t>(j)];
      prod *= std::pow(orbital(j), nj);
      lg -= std::lgamma(nj + 1.0);
    }
    amp[s] = prod * std::exp(0.5 * lg);
  }
  double n2 = 0.0;
  for (const auto& a : amp) n2 += std::norm(a);
  for (auto& a : amp) a /= std::sqrt(n2);
  return ManyBodyState(std::move(basis), std::move(amp));
}

Eigen::VectorXcd to_eigen(std::span<const cplx> v) {
  return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

TEST_CASE("lanczos ground state matches dense diagonalization (energies to 1e-9)") {
  struct Case {
    int n, m;
    double u;
  };
  for (auto c : {Case{5, 5, 3.0}, Case{5, 6, 1.0}, Case{8, 5, 12.0}}) {
    const auto basis = build_basis(c.n, c.m);
    BoseHubbardModel model;
    model.hop_J = 1.0;
    model.onsite_U = c.u;
    const auto h = build_hamiltonian(*basis, model);
    const auto gs = ground_state(h, basis);
    const auto dense = oracle::dense_ground_state(oracle::dense_hamiltonian(*basis, model));
    CAPTURE(c.n);
    CAPTURE(c.m);
    CHECK(std::abs(gs.energy - dense.energy) < 1e-9);
    CHECK(gs.residual <= 1e-10);
    const double overlap = std::abs((to_eigen(gs.state.amplitudes()).adjoint() * dense.vector)(0));
    CHECK(overlap == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("U=0 ground state is the condensate of the lowest single-particle orbital") {
  const auto basis = build_basis(4, 5);
  BoseHubbardModel model;
  model.hop_J = 1.0;
  const auto h = build_hamiltonian(*basis, model);
  const auto gs = ground_state(h, basis);

  CHECK(natural_spectrum(one_body_rdm(gs.state)).condensate_fraction ==
        doctest::Approx(1.0).epsilon(1e-9));

  // single-particle 5x5 hopping matrix, lowest orbital
  Eigen::MatrixXcd sp = Eigen::MatrixXcd::Zero(5, 5);
  for (int i = 0; i + 1 < 5; ++i) {
    sp(i, i + 1) = -1.0;
    sp(i + 1, i) = -1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sp);
  const auto expect = condensate_of_orbital(basis, es.eigenvectors().col(0));
  CHECK(state_fidelity(gs.state, expect) == doctest::Approx(1.0).epsilon(1e-9));
  // N-boson condensate energy: N times the orbital energy
  CHECK(gs.energy == doctest::Approx(4.0 * es.eigenvalues()(0)).epsilon(1e-10));
}

TEST_CASE("single atom ground state is the lowest single-particle eigenstate") {
  const auto basis = build_basis(1, 6);
  BoseHubbardModel model;
  model.hop_J = 2.0;
  const auto h = build_hamiltonian(*basis, model);
  const auto gs = ground_state(h, basis);
  const auto dense = oracle::dense_ground_state(oracle::to_dense(h));
  CHECK(std::abs(gs.energy - dense.energy) < 1e-11);
}

TEST_CASE("ground state family: n = 1 at U=0, monotone non-increasing, Mott plateaus") {
  BoseHubbardModel model;
  model.hop_J = 1.0;

  // single point
  const auto single = ground_state_family(build_basis(3, 3), model, std::vector<double>{0.0});
  CHECK(single.size() == 1);
  CHECK(single[0].condensate_fraction == doctest::Approx(1.0).epsilon(1e-9));

  // M=N=2: n falls from 1 toward 1/2 (3x3 diagonalization oracle cross-check)
  const std::vector<double> us{0.0, 1.0, 4.0, 16.0, 64.0};
  const auto fam2 = ground_state_family(build_basis(2, 2), model, us);
  CHECK(fam2.front().condensate_fraction == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fam2.back().condensate_fraction > 0.5);
  CHECK(fam2.back().condensate_fraction < 0.55);
  for (std::size_t i = 1; i < fam2.size(); ++i) {
    CHECK(fam2[i].condensate_fraction <= fam2[i - 1].condensate_fraction + 1e-12);
  }

  // monotonicity against the dense oracle for M=N in {2,3,4,5}
  for (int nm = 2; nm <= 5; ++nm) {
    const auto basis = build_basis(nm, nm);
    const auto fam = ground_state_family(basis, model, us);
    double prev = 2.0;
    for (const auto& pt : fam) {
      BoseHubbardModel bm = model;
      bm.onsite_U = pt.onsite_U;
      const auto dense = oracle::dense_ground_state(oracle::dense_hamiltonian(*basis, bm));
      CHECK(std::abs(pt.energy - dense.energy) < 1e-9);
      CHECK(pt.condensate_fraction <= prev + 1e-12);
      prev = pt.condensate_fraction;
    }
  }

  // M=N=5 deep Mott: n approaches the 1/M plateau from above
  const auto fam5 = ground_state_family(build_basis(5, 5), model, std::vector<double>{50.0});
  CHECK(fam5[0].condensate_fraction > 0.20);
  CHECK(fam5[0].condensate_fraction < 0.30);

  CHECK_THROWS_AS(ground_state_family(build_basis(2, 2), model, std::vector<double>{}),
                  validation_error);
  CHECK_THROWS_AS(
      ground_state_family(build_basis(2, 2), model, std::vector<double>{1.0, 0.5}),
      validation_error);
}

TEST_CASE("phase imprint: identity at zero, gradient equals step on lattice sites") {
  const auto basis = build_basis(3, 4);
  const auto psi = oracle::random_state(basis, 3);

  const std::vector<double> zero(4, 0.0);
  const auto same = apply_phase_imprint(psi, zero);
  for (std::size_t i = 0; i < psi.amplitudes().size(); ++i) {
    CHECK(same.amplitudes()[i] == psi.amplitudes()[i]);
  }

  // gradient k with k * a = dphi equals the per-site step imprint up to a
  // global phase (site coordinates are centered)
  const double dphi = 0.77;
  BoseHubbardModel model;
  const auto x = basis->site_positions(model.lattice_constant);
  std::vector<double> grad(4), step(4);
  for (int j = 0; j < 4; ++j) {
    grad[static_cast<std::size_t>(j)] = dphi / model.lattice_constant * x[static_cast<std::size_t>(j)];
    step[static_cast<std::size_t>(j)] = dphi * j;
  }
  const auto a = apply_phase_imprint(psi, grad);
  const auto b = apply_phase_imprint(psi, step);
  CHECK(state_fidelity(a, b) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("propagate: identity at zero duration, eigenstate phase, expm oracle") {
  const auto basis = build_basis(3, 5);  // dim 35
  BoseHubbardModel model;
  model.hop_J = 1.0;
  model.onsite_U = 0.6;
  const auto h = build_hamiltonian(*basis, model);
  const auto dense = oracle::to_dense(h);

  const auto psi = oracle::random_state(basis, 17);
  const auto same = propagate(psi, h, 0.0);
  for (std::size_t i = 0; i < psi.amplitudes().size(); ++i) {
    CHECK(same.amplitudes()[i] == psi.amplitudes()[i]);
  }

  // eigenstate picks up exactly exp(-i E t)
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
  const Eigen::VectorXcd v1 = es.eigenvectors().col(1);
  std::vector<cplx> v(v1.data(), v1.data() + v1.size());
  const ManyBodyState eig(basis, v);
  const auto evolved = propagate(eig, h, 2.5);
  const cplx expected_phase = std::polar(1.0, -es.eigenvalues()(1) * 2.5);
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(std::abs(evolved.amplitudes()[i] - expected_phase * v[i]) < 1e-9);
  }

  // longer random evolution against the dense matrix exponential
  const double t = 7.3;
  const auto krylov = propagate(psi, h, t, 1e-10);
  const Eigen::VectorXcd ref = oracle::dense_expm_apply(dense, to_eigen(psi.amplitudes()), t);
  double err2 = 0.0;
  for (Eigen::Index i = 0; i < ref.size(); ++i) {
    err2 += std::norm(krylov.amplitudes()[static_cast<std::size_t>(i)] - ref(i));
  }
  CHECK(std::sqrt(err2) < 1e-8);
  CHECK(std::abs(krylov.norm() - 1.0) < 1e-9);
  CHECK(krylov.time() == doctest::Approx(psi.time() + t));

  // energy conservation along the way
  const auto hpsi = apply_hamiltonian(h, krylov.amplitudes());
  const double e_after =
      kernels::dotc(krylov.amplitudes().data(), hpsi.data(), h.dim()).real();
  const auto hpsi0 = apply_hamiltonian(h, psi.amplitudes());
  const double e_before = kernels::dotc(psi.amplitudes().data(), hpsi0.data(), h.dim()).real();
  CHECK(std::abs(e_after - e_before) <= 1e-8 * std::max(1.0, std::abs(e_before)));
}

TEST_CASE("tilt pulse: gamma = 0 is plain evolution; J = 0 reduces to a diagonal imprint") {
  const auto basis = build_basis(2, 4);
  BoseHubbardModel model;
  model.hop_J = 0.8;
  const auto psi = oracle::random_state(basis, 23);

  const auto h = build_hamiltonian(*basis, model);
  const auto a = apply_tilt_pulse(psi, model, 0.0, 1.2, 4);
  const auto b = propagate(psi, h, 1.2);
  CHECK(state_fidelity(a, b) == doctest::Approx(1.0).epsilon(1e-10));

  // frozen hopping, no interaction: exactly the imprint with phi_j = -gamma x_j T
  BoseHubbardModel frozen;
  frozen.hop_J = 0.0;
  const double gamma = 0.9;
  const double t_pulse = 0.7;
  const auto tilted = apply_tilt_pulse(psi, frozen, gamma, t_pulse, 3);
  const auto x = basis->site_positions(frozen.lattice_constant);
  std::vector<double> phases(4);
  for (int j = 0; j < 4; ++j) phases[static_cast<std::size_t>(j)] = -gamma * x[static_cast<std::size_t>(j)] * t_pulse;
  const auto imprinted = apply_phase_imprint(psi, phases);
  double max_diff = 0.0;
  for (std::size_t i = 0; i < psi.amplitudes().size(); ++i) {
    max_diff = std::max(max_diff, std::abs(tilted.amplitudes()[i] - imprinted.amplitudes()[i]));
  }
  CHECK(max_diff < 1e-9);

  // frozen hopping with interactions: diagonal evolution oracle
  BoseHubbardModel frozen_u = frozen;
  frozen_u.onsite_U = 1.4;
  const auto tilted_u = apply_tilt_pulse(psi, frozen_u, gamma, t_pulse, 2);
  for (std::size_t s = 0; s < basis->dim(); ++s) {
    auto occ = basis->occupation(s);
    double e_diag = 0.0;
    for (int j = 0; j < 4; ++j) {
      const double nj = occ[static_cast<std::size_t>(j)];
      e_diag += 0.5 * frozen_u.onsite_U * nj * (nj - 1.0) + gamma * x[static_cast<std::size_t>(j)] * nj;
    }
    const cplx expect = psi.amplitudes()[s] * std::polar(1.0, -e_diag * t_pulse);
    CHECK(std::abs(tilted_u.amplitudes()[s] - expect) < 1e-9);
  }
}

TEST_CASE("tilt pulse converges to the instantaneous imprint as T -> 0 at fixed gamma*T") {
  const auto basis = build_basis(2, 2);
  BoseHubbardModel model;
  model.hop_J = 1.0;
  const auto gs = ground_state(build_hamiltonian(*basis, model), basis).state;

  // target: phase difference pi/2 between the two sites
  const auto x = basis->site_positions(model.lattice_constant);
  std::vector<double> phases(2);
  for (int j = 0; j < 2; ++j) phases[static_cast<std::size_t>(j)] = -(kPi / 2.0) * x[static_cast<std::size_t>(j)];
  const auto target = apply_phase_imprint(gs, phases);

  double prev = 0.0;
  for (double t_pulse : {0.5, 0.25, 0.125, 0.0625, 0.03125}) {
    const double gamma = (kPi / 2.0) / t_pulse;  // gamma * a * T = pi/2
    const auto pulsed = apply_tilt_pulse(gs, model, gamma, t_pulse, 8);
    const double f = state_fidelity(pulsed, target);
    CAPTURE(t_pulse);
    CHECK(f > prev);  // monotone approach
    prev = f;
  }
  CHECK(prev > 0.999);
}

TEST_CASE("run_quench: Mott initial keeps <x> pinned, stationary ground state stays put") {
  const auto basis = build_basis(5, 5);
  BoseHubbardModel model;
  model.hop_J = 1.0;

  QuenchProtocol protocol;
  protocol.boost.kind = BoostSpec::Kind::imprint_step;
  protocol.boost.delta_phi = kPi / 2.0;
  protocol.probe_U = 0.0;
  protocol.total_time = 8.0;
  protocol.dt_sample = 0.05;

  const std::vector<std::uint16_t> unit{1, 1, 1, 1, 1};
  const auto mi = make_mott_state(basis, unit);
  const auto ts = run_quench(basis, model, mi, protocol);
  for (std::size_t i = 0; i < ts.times.size(); ++i) {
    CHECK(std::abs(ts.mean_x[i]) <= 1e-6);
    CHECK(std::abs(ts.current[i]) <= 1e-8);
    double row = 0.0;
    for (double d : ts.densities[i]) row += d;
    CHECK(std::abs(row - 5.0) <= 1e-8);
  }

  // no boost from a stationary state: every observable constant
  QuenchProtocol still = protocol;
  still.boost.kind = BoostSpec::Kind::none;
  BoseHubbardModel prep = model;
  prep.onsite_U = 2.0;
  still.probe_U = 2.0;  // same Hamiltonian before and after
  const auto gs = ground_state(build_hamiltonian(*basis, prep), basis).state;
  const auto flat = run_quench(basis, prep, gs, still);
  for (std::size_t i = 0; i < flat.times.size(); ++i) {
    CHECK(std::abs(flat.mean_x[i] - flat.mean_x[0]) < 1e-8);
    CHECK(std::abs(flat.current[i] - flat.current[0]) < 1e-8);
    for (std::size_t j = 0; j < flat.densities[i].size(); ++j) {
      CHECK(std::abs(flat.densities[i][j] - flat.densities[0][j]) < 1e-8);
    }
  }
}

TEST_CASE("run_quench: double-well superfluid oscillates at the two-level splitting 2J") {
  const auto basis = build_basis(2, 2);
  BoseHubbardModel model;
  model.hop_J = 1.0;
  const auto gs = ground_state(build_hamiltonian(*basis, model), basis).state;

  QuenchProtocol protocol;
  protocol.boost.kind = BoostSpec::Kind::imprint_step;
  protocol.boost.delta_phi = kPi / 2.0;
  protocol.total_time = 25.0;
  protocol.dt_sample = 0.02;
  const auto ts = run_quench(basis, model, gs, protocol);

  // period h/(2J) = pi/J, i.e. omega = 2J
  const auto metrics = extract_frequency(ts);
  CHECK(metrics.frequency == doctest::Approx(2.0).epsilon(0.01));
  // amplitude (a/2) sin(pi/2) for the non-interacting double well
  const auto amp = extract_amplitude(ts, 1);
  CHECK(amp.amplitude == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("run_quench: mirror antisymmetry under dphi -> -dphi") {
  const auto basis = build_basis(4, 4);
  BoseHubbardModel model;
  model.hop_J = 1.0;
  const auto gs = ground_state(build_hamiltonian(*basis, model), basis).state;

  QuenchProtocol plus;
  plus.boost.kind = BoostSpec::Kind::imprint_step;
  plus.boost.delta_phi = kPi / 2.0;
  plus.total_time = 6.0;
  plus.dt_sample = 0.05;
  QuenchProtocol minus = plus;
  minus.boost.delta_phi = -kPi / 2.0;

  const auto ts_p = run_quench(basis, model, gs, plus);
  const auto ts_m = run_quench(basis, model, gs, minus);
  for (std::size_t i = 0; i < ts_p.times.size(); ++i) {
    CHECK(std::abs(ts_p.mean_x[i] + ts_m.mean_x[i]) < 1e-8);
  }
}

TEST_CASE("run_quench with U=0 probe matches the closed one-body RDM evolution") {
  const auto basis = build_basis(5, 5);
  BoseHubbardModel model;
  model.hop_J = 1.0;
  BoseHubbardModel prep = model;
  prep.onsite_U = 6.0;
  const auto gs = ground_state(build_hamiltonian(*basis, prep), basis).state;

  QuenchProtocol protocol;
  protocol.boost.kind = BoostSpec::Kind::imprint_step;
  protocol.boost.delta_phi = kPi / 2.0;
  protocol.probe_U = 0.0;
  protocol.total_time = 10.0;
  protocol.dt_sample = 0.1;
  const auto ts = run_quench(basis, model, gs, protocol);

  // same boost applied to the RDM, then exact one-body evolution
  std::vector<double> phases(5);
  for (int j = 0; j < 5; ++j) phases[static_cast<std::size_t>(j)] = j * kPi / 2.0;
  const auto boosted = apply_phase_imprint(gs, phases);
  const auto rdm0 = one_body_rdm(boosted);
  const auto ref = oracle::mean_x_from_rdm_evolution(rdm0.matrix, model, 5, 5, ts.times);
  for (std::size_t i = 0; i < ts.times.size(); ++i) {
    CHECK(std::abs(ts.mean_x[i] - ref[i]) < 1e-8);
  }
}

TEST_CASE("protocol validation rejects malformed runs") {
  QuenchProtocol p;
  p.total_time = 0.0;
  p.dt_sample = 0.1;
  CHECK_THROWS_AS(p.validate(), validation_error);
  p.total_time = 10.0;
  p.dt_sample = 0.0;
  CHECK_THROWS_AS(p.validate(), validation_error);
  p.dt_sample = 0.1;
  p.boost.kind = BoostSpec::Kind::tilt_pulse;
  p.boost.duration = 2.0;  // not brief: >= total/10
  CHECK_THROWS_AS(p.validate(), validation_error);
  p.boost.duration = 0.5;
  CHECK_NOTHROW(p.validate());
}
