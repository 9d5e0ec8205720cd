#include <chrono>
#include <limits>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <numbers>
#include <thread>
#include <utility>

#include <json.hpp>

#include "internal.hpp"
#include "latkick/analysis.hpp"
#include "latkick/metrology.hpp"
#include "latkick/scenario.hpp"
#include "latkick/version.hpp"

namespace latkick {

namespace {

namespace fs = std::filesystem;
using detail::CsvBuilder;

constexpr double kPi = std::numbers::pi;

BoseHubbardModel to_bh_model(const ModelSection& m, double onsite_U) {
  BoseHubbardModel bh;
  bh.hop_J = m.hop_J;
  bh.onsite_U = onsite_U;
  bh.site_energies = m.site_energies;
  bh.lattice_constant = m.lattice_constant;
  bh.boundary = m.boundary;
  return bh;
}

QuenchProtocol to_quench(const ProtocolSection& p) {
  QuenchProtocol q;
  q.boost = p.boost;
  q.probe_U = p.probe_U;
  q.total_time = p.total_time;
  q.dt_sample = p.dt_sample;
  q.propagator_tolerance = p.tolerance;
  return q;
}

std::string timeseries_csv(const TimeSeries& ts) {
  std::vector<std::string> header = {"t_s", "mean_x_over_a", "current"};
  for (int i = 1; i <= ts.meta.n_sites; ++i) header.push_back("n_site_" + std::to_string(i));
  CsvBuilder csv(std::move(header));
  for (std::size_t i = 0; i < ts.times.size(); ++i) {
    csv.begin_row().add(ts.times[i]).add(ts.mean_x[i]).add(ts.current[i]);
    for (double d : ts.densities[i]) csv.add(d);
  }
  return csv.str();
}

int smoothing_window_for(const TimeSeries& ts, const ProtocolSection& p) {
  return p.smoothing_window > 0 ? p.smoothing_window : default_smoothing_window(ts);
}

std::vector<std::uint16_t> balanced_filling(int n_atoms, int n_sites) {
  std::vector<std::uint16_t> f(static_cast<std::size_t>(n_sites));
  const int base = n_atoms / n_sites;
  const int extra = n_atoms % n_sites;
  for (int i = 0; i < n_sites; ++i) {
    f[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(base + (i < extra ? 1 : 0));
  }
  return f;
}

ManyBodyState initial_state(const std::shared_ptr<const FockBasis>& basis,
                            const ModelSection& m, const InitialSection& ini) {
  switch (ini.kind) {
    case InitialSection::Kind::superfluid:
      return make_superfluid_state(basis);
    case InitialSection::Kind::mott: {
      auto filling = ini.mott_filling.empty()
                         ? balanced_filling(basis->n_atoms(), basis->n_sites())
                         : ini.mott_filling;
      return make_mott_state(basis, filling);
    }
    case InitialSection::Kind::ground:
    default: {
      const auto h = build_hamiltonian(*basis, to_bh_model(m, ini.prep_U));
      return ground_state(h, basis).state;
    }
  }
}

using FileList = std::vector<std::pair<std::string, std::string>>;

FileList run_double_well(const ScenarioConfig& cfg) {
  const auto basis =
      build_basis(cfg.model.n_atoms, cfg.model.n_sites, cfg.model.max_basis_dim);
  const auto probe_model = to_bh_model(cfg.model, 0.0);
  const auto protocol = to_quench(cfg.protocol);

  InitialSection sf;
  sf.kind = InitialSection::Kind::ground;
  sf.prep_U = 0.0;
  InitialSection mott;
  mott.kind = InitialSection::Kind::mott;
  mott.mott_filling = cfg.initial.mott_filling;

  CsvBuilder summary({"state", "condensate_fraction", "amplitude_over_a"});
  FileList files;
  for (const auto& [label, ini] : {std::pair{std::string("superfluid"), sf},
                                   std::pair{std::string("mott"), mott}}) {
    const auto psi0 = initial_state(basis, cfg.model, ini);
    const double n = natural_spectrum(one_body_rdm(psi0)).condensate_fraction;
    const auto ts = run_quench(basis, probe_model, psi0, protocol);
    const auto amp = extract_amplitude(ts, smoothing_window_for(ts, cfg.protocol));
    files.emplace_back("timeseries_" + label + ".csv", timeseries_csv(ts));
    summary.begin_row().add(label).add(n).add(amp.amplitude);
  }
  files.emplace_back("summary.csv", summary.str());
  return files;
}

FileList run_lattice_sweep(const ScenarioConfig& cfg) {
  const auto basis =
      build_basis(cfg.model.n_atoms, cfg.model.n_sites, cfg.model.max_basis_dim);
  const auto probe_model = to_bh_model(cfg.model, 0.0);
  const auto protocol = to_quench(cfg.protocol);
  const auto& u_list = cfg.sweep.u_list;

  struct Point {
    double n = 0.0;
    double amplitude = 0.0;
    std::string csv;
  };
  std::vector<Point> points(u_list.size());
  detail::parallel_for_indexed(u_list.size(), thread_cap(), [&](std::size_t i) {
    const auto h = build_hamiltonian(*basis, to_bh_model(cfg.model, u_list[i]));
    const auto gs = ground_state(h, basis);
    const double n = natural_spectrum(one_body_rdm(gs.state)).condensate_fraction;
    const auto ts = run_quench(basis, probe_model, gs.state, protocol);
    const auto amp = extract_amplitude(ts, smoothing_window_for(ts, cfg.protocol));
    points[i] = {n, amp.amplitude, timeseries_csv(ts)};
  });

  FileList files;
  CsvBuilder summary({"U", "condensate_fraction", "amplitude_over_a"});
  for (std::size_t i = 0; i < u_list.size(); ++i) {
    summary.begin_row().add(u_list[i]).add(points[i].n).add(points[i].amplitude);
    files.emplace_back("timeseries_u" + std::to_string(i) + ".csv", std::move(points[i].csv));
  }
  files.emplace_back("sweep_summary.csv", summary.str());
  return files;
}

FileList run_ka_sweep(const ScenarioConfig& cfg) {
  const auto basis =
      build_basis(cfg.model.n_atoms, cfg.model.n_sites, cfg.model.max_basis_dim);
  const auto probe_model = to_bh_model(cfg.model, 0.0);
  const auto h0 = build_hamiltonian(*basis, probe_model);
  const auto gs = ground_state(h0, basis);

  const auto& ka_list = cfg.sweep.ka_list;
  struct Point {
    double omega_extracted = 0.0;
    double omega_eq = 0.0;
  };
  std::vector<Point> points(ka_list.size());
  detail::parallel_for_indexed(ka_list.size(), thread_cap(), [&](std::size_t i) {
    const double ka = ka_list[i];
    const double omega_eq = tb_frequency(ka, cfg.model.hop_J, cfg.model.n_sites);
    const double period = 2.0 * kPi / omega_eq;

    ProtocolSection p = cfg.protocol;
    p.boost.kind = BoostSpec::Kind::imprint_gradient;
    p.boost.gradient_k = ka / cfg.model.lattice_constant;
    p.probe_U = 0.0;
    p.total_time = cfg.sweep.record_periods * period;
    if (p.dt_sample <= 0.0) p.dt_sample = period / 64.0;
    const auto ts = run_quench(basis, probe_model, gs.state, to_quench(p));
    points[i] = {extract_frequency(ts).frequency, omega_eq};
  });

  CsvBuilder csv({"ka_rad", "omega_extracted", "omega_eq7"});
  for (std::size_t i = 0; i < ka_list.size(); ++i) {
    csv.begin_row().add(ka_list[i]).add(points[i].omega_extracted).add(points[i].omega_eq);
  }
  FileList files;
  files.emplace_back("ka_sweep.csv", csv.str());
  return files;
}

FileList run_bands(const ScenarioConfig& cfg) {
  const auto& b = cfg.bands;
  ContinuousLattice lat{b.V0, b.period, b.n_cells, b.boundary, b.grid_per_cell};
  lat.validate();

  std::vector<std::pair<std::string, std::vector<double>>> spectra;
  if (b.method == "finite_difference" || b.method == "both") {
    spectra.emplace_back("finite_difference",
                         solve_spectrum(lat, b.n_levels, SpectrumMethod::finite_difference));
  }
  if (b.method == "spectral" || b.method == "both") {
    spectra.emplace_back("spectral",
                         solve_spectrum(lat, b.n_levels, SpectrumMethod::spectral));
  }

  double cross_diff = std::numeric_limits<double>::quiet_NaN();
  if (spectra.size() == 2) {
    double scale = 0.0;
    for (double e : spectra[0].second) scale = std::max(scale, std::abs(e));
    double d = 0.0;
    for (std::size_t i = 0; i < spectra[0].second.size(); ++i) {
      d = std::max(d, std::abs(spectra[0].second[i] - spectra[1].second[i]));
    }
    cross_diff = d / std::max(scale, 1e-300);
  }

  const double er = recoil_energy(lat);
  FileList files;
  CsvBuilder summary({"method", "hop_J", "alpha", "band_fit_residual", "band_width",
                      "rabi_period_s", "recoil_energy", "V0_over_recoil",
                      "cross_method_max_rel_diff", "reference_J_ratio",
                      "reference_period_ratio"});
  for (const auto& [name, evals] : spectra) {
    CsvBuilder table({"level", "energy"});
    for (std::size_t i = 0; i < evals.size(); ++i) {
      table.begin_row().add(static_cast<int>(i)).add(evals[i]);
    }
    files.emplace_back("bands_" + name + ".csv", table.str());

    const auto band = tunneling_from_band(evals, b.n_cells, b.period, b.boundary);
    // two-level splitting 2J <-> Rabi period h / (2J) = pi / J with hbar = 1
    const double rabi = kPi / band.hop_J;
    const double j_ratio = b.reference_J > 0.0
                               ? band.hop_J / b.reference_J
                               : std::numeric_limits<double>::quiet_NaN();
    const double p_ratio = b.reference_period > 0.0
                               ? rabi / b.reference_period
                               : std::numeric_limits<double>::quiet_NaN();
    summary.begin_row()
        .add(name)
        .add(band.hop_J)
        .add(band.alpha)
        .add(band.band_fit_residual)
        .add(band.eigenvalues.back() - band.eigenvalues.front())
        .add(rabi)
        .add(er)
        .add(b.V0 / er)
        .add(cross_diff)
        .add(j_ratio)
        .add(p_ratio);
  }
  files.emplace_back("band_summary.csv", summary.str());
  return files;
}

FileList run_gradiometer(const ScenarioConfig& cfg) {
  const auto& g = cfg.gradiometer;
  GradiometerParams p = resolve_gradiometer(g);
  const double required = required_tilt_product(p, g.target_phase);
  double phase = std::numeric_limits<double>::quiet_NaN();
  if (g.tilt_angle >= 0.0 && g.tilt_time >= 0.0) {
    p.tilt_angle = g.tilt_angle;
    p.tilt_time = g.tilt_time;
    phase = gradiometer_phase(p);
  }

  CsvBuilder csv({"species", "charge_si", "gradient_si", "lattice_constant_m",
                  "target_phase_rad", "required_sin_theta_T_s", "tilt_angle_rad",
                  "tilt_time_s", "delta_phi_rad"});
  csv.begin_row()
      .add(g.species)
      .add(p.charge)
      .add(p.gradient)
      .add(p.lattice_constant)
      .add(g.target_phase)
      .add(required)
      .add(g.tilt_angle)
      .add(g.tilt_time)
      .add(phase);
  FileList files;
  files.emplace_back("gradiometer.csv", csv.str());
  return files;
}

FileList run_custom(const ScenarioConfig& cfg) {
  const auto basis =
      build_basis(cfg.model.n_atoms, cfg.model.n_sites, cfg.model.max_basis_dim);
  const auto probe_model = to_bh_model(cfg.model, 0.0);
  const auto psi0 = initial_state(basis, cfg.model, cfg.initial);
  const double n = natural_spectrum(one_body_rdm(psi0)).condensate_fraction;
  const auto ts = run_quench(basis, probe_model, psi0, to_quench(cfg.protocol));
  const auto amp = extract_amplitude(ts, smoothing_window_for(ts, cfg.protocol));
  double omega = std::numeric_limits<double>::quiet_NaN();
  try {
    omega = extract_frequency(ts).frequency;
  } catch (const numerical_error&) {
    // flat signal: leave nan
  }

  FileList files;
  files.emplace_back("timeseries.csv", timeseries_csv(ts));
  CsvBuilder summary({"initial_condensate_fraction", "amplitude_over_a", "dominant_omega"});
  summary.begin_row().add(n).add(amp.amplitude).add(omega);
  files.emplace_back("summary.csv", summary.str());
  return files;
}

std::string utc_now_iso() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

GradiometerParams resolve_gradiometer(const GradiometerSection& section) {
  GradiometerParams p;
  p.gradient = section.gradient;
  if (section.species == "rb87") {
    p.charge = constants::kMassRb87;
    p.lattice_constant = section.lattice_constant > 0.0 ? section.lattice_constant : 390e-9;
  } else if (section.species == "cr52") {
    p.charge = 6.0 * constants::kBohrMagneton;
    p.lattice_constant = section.lattice_constant > 0.0 ? section.lattice_constant : 532e-9;
  } else {
    p.charge = section.charge;
    if (section.lattice_constant <= 0.0) {
      throw validation_error("gradiometer: custom species requires lattice_constant > 0");
    }
    p.lattice_constant = section.lattice_constant;
  }
  return p;
}

int thread_cap() {
  if (const char* env = std::getenv("LATKICK_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

RunManifest run_scenario(const ScenarioConfig& cfg) {
  const auto wall_start = std::chrono::steady_clock::now();
  const std::string started = utc_now_iso();

  FileList files;
  switch (cfg.kind) {
    case ScenarioKind::double_well:
      files = run_double_well(cfg);
      break;
    case ScenarioKind::lattice_sweep_n:
    case ScenarioKind::lattice_interacting:
      files = run_lattice_sweep(cfg);
      break;
    case ScenarioKind::ka_sweep:
      files = run_ka_sweep(cfg);
      break;
    case ScenarioKind::bands:
      files = run_bands(cfg);
      break;
    case ScenarioKind::gradiometer:
      files = run_gradiometer(cfg);
      break;
    case ScenarioKind::custom:
      files = run_custom(cfg);
      break;
  }

  // everything computed; now touch the filesystem
  RunManifest manifest;
  manifest.scenario = to_string(cfg.kind);
  manifest.version = kVersion;
  manifest.started_utc = started;
  manifest.directory = fs::path(cfg.out_dir);
  fs::create_directories(manifest.directory);

  for (const auto& [name, content] : files) {
    const fs::path target = manifest.directory / name;
    const fs::path tmp = manifest.directory / (name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw error("cannot write output file '" + tmp.string() + "'");
      out.write(content.data(), static_cast<std::streamsize>(content.size()));
    }
    fs::rename(tmp, target);
    manifest.outputs.push_back(
        {name, content.size(), detail::fnv1a64_hex({content.data(), content.size()})});
  }

  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

  nlohmann::json j;
  j["artifact"] = "latkick";
  j["version"] = manifest.version;
  j["scenario"] = manifest.scenario;
  j["started_utc"] = manifest.started_utc;
  j["wall_seconds"] = manifest.wall_seconds;
  j["config"] = cfg.source_text;
  j["outputs"] = nlohmann::json::array();
  for (const auto& rec : manifest.outputs) {
    j["outputs"].push_back({{"file", rec.name}, {"bytes", rec.bytes}, {"fnv1a64", rec.fnv1a64}});
  }
  {
    const fs::path tmp = manifest.directory / "manifest.json.tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw error("cannot write manifest");
    out << j.dump(2) << "\n";
    out.close();
    fs::rename(tmp, manifest.directory / "manifest.json");
  }
  return manifest;
}

}  // namespace latkick
