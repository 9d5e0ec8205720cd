#pragma once

// Ground states (Lanczos), phase-imprint / tilt-pulse momentum boosts, and
// adaptive short-iterative Krylov time propagation producing sampled
// observable time series.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latkick/fock.hpp"
#include "latkick/model.hpp"

namespace latkick {

struct LanczosOptions {
  double tol = 1e-10;        // residual ||Hv - Ev||
  int block_size = 64;       // Krylov block per restart (capped at dim)
  int max_restarts = 200;
};

struct GroundStateResult {
  ManyBodyState state;
  double energy;
  double residual;
  int restarts;
};

/// Lowest eigenpair of a Hermitian operator by restarted Lanczos with full
/// reorthogonalization. Deterministic: fixed-seed start vector, and the
/// phase is fixed by making the largest-magnitude amplitude real positive.
GroundStateResult ground_state(const SparseHamiltonian& h,
                               std::shared_ptr<const FockBasis> basis,
                               const LanczosOptions& opts = {});

struct FamilyPoint {
  double onsite_U;
  ManyBodyState state;
  double energy;
  double condensate_fraction;
};

/// Ground states of `base_model` with onsite_U swept over `u_list`
/// (ascending), each tagged with its condensate fraction.
std::vector<FamilyPoint> ground_state_family(std::shared_ptr<const FockBasis> basis,
                                             const BoseHubbardModel& base_model,
                                             std::span<const double> u_list,
                                             const LanczosOptions& opts = {});

/// Multiplies the amplitude of |n_1...n_M> by exp(i sum_j phases_j n_j).
ManyBodyState apply_phase_imprint(const ManyBodyState& state,
                                  std::span<const double> phases);

/// Propagates under H(model) + gamma * sum_i x_i n_i for duration T, split
/// into `steps` equal segments. Not an impulse: hopping acts during the pulse.
ManyBodyState apply_tilt_pulse(const ManyBodyState& state, const BoseHubbardModel& model,
                               double gamma, double duration, int steps = 1,
                               double tolerance = 1e-10);

/// exp(-i H t) |psi> by adaptive short-iterative Krylov stepping.
/// Norm drift stays below 1e-9 per call; throws numerical_error on step-size
/// underflow.
ManyBodyState propagate(const ManyBodyState& state, const SparseHamiltonian& h,
                        double duration, double tolerance = 1e-10);

struct BoostSpec {
  enum class Kind { none, imprint_step, imprint_gradient, tilt_pulse };
  Kind kind = Kind::none;
  double delta_phi = 0.0;   // imprint_step: phase step between neighboring sites
  double gradient_k = 0.0;  // imprint_gradient: phases k * x_i
  double gamma = 0.0;       // tilt_pulse: energy per length
  double duration = 0.0;    // tilt_pulse: seconds
  int tilt_steps = 16;
};

struct QuenchProtocol {
  BoostSpec boost;
  double probe_U = 0.0;
  double total_time = 0.0;
  double dt_sample = 0.0;
  double propagator_tolerance = 1e-10;

  void validate() const;
};

struct TimeSeriesMeta {
  BoseHubbardModel model;       // probe-phase model (onsite_U = probe_U)
  QuenchProtocol protocol;
  int n_atoms = 0;
  int n_sites = 0;
  double initial_current = 0.0;
  bool stationarity_warning = false;
};

/// Sampled observables: <x>/a, per-site densities, and the bond current.
struct TimeSeries {
  std::vector<double> times;
  std::vector<double> mean_x;   // units of the lattice constant
  std::vector<double> current;
  std::vector<std::vector<double>> densities;  // one row per sample
  TimeSeriesMeta meta;
};

/// Boost -> swap interaction to probe_U -> sample every dt_sample.
/// The boost is applied before t = 0; samples cover [0, total_time].
TimeSeries run_quench(std::shared_ptr<const FockBasis> basis, const BoseHubbardModel& model,
                      const ManyBodyState& initial, const QuenchProtocol& protocol);

}  // namespace latkick
