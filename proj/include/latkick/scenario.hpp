#pragma once

// Scenario surface: parse line-oriented `key = value` configs with [section]
// headers, execute preset or custom scenarios, and emit CSV tables plus a
// run manifest with per-output checksums. Identical configs byte-reproduce
// all CSVs.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "latkick/dynamics.hpp"
#include "latkick/singleparticle.hpp"

namespace latkick {

enum class ScenarioKind {
  double_well,
  lattice_sweep_n,
  lattice_interacting,
  ka_sweep,
  bands,
  gradiometer,
  custom,
};

std::string to_string(ScenarioKind kind);

struct ModelSection {
  int n_atoms = 2;
  int n_sites = 2;
  double hop_J = 1.0;
  double lattice_constant = 1.0;
  Boundary boundary = Boundary::open;
  std::vector<double> site_energies;
  std::uint64_t max_basis_dim = kDefaultBasisCap;
};

struct ProtocolSection {
  BoostSpec boost;
  double probe_U = 0.0;
  double total_time = 40.0;
  double dt_sample = 0.05;
  double tolerance = 1e-10;
  int smoothing_window = 0;  // 0: auto (1/20 of the dominant period, odd)
};

struct InitialSection {
  enum class Kind { ground, superfluid, mott };
  Kind kind = Kind::ground;
  double prep_U = 0.0;                       // ground: preparation interaction
  std::vector<std::uint16_t> mott_filling;   // mott: empty = uniform N/M
};

struct SweepSection {
  std::vector<double> u_list;    // lattice_sweep_n / lattice_interacting
  std::vector<double> ka_list;   // ka_sweep
  double record_periods = 6.0;   // ka_sweep record length in predicted periods
};

struct BandsSection {
  double V0 = 0.0;
  double period = 1.0;
  int n_cells = 1;
  Wall boundary = Wall::periodic;
  int grid_per_cell = 32;
  int n_levels = 0;              // 0: n_cells + 8 (band plus gap check margin)
  std::string method = "both";   // finite_difference | spectral | both
  double reference_J = 0.0;      // optional: quoted J to compare against
  double reference_period = 0.0; // optional: quoted Rabi period to compare against
};

struct GradiometerSection {
  std::string species = "custom";   // rb87 | cr52 | custom
  double charge = 0.0;              // custom species only
  double gradient = 0.0;
  double lattice_constant = 0.0;    // 0: species default (lambda / 2)
  double target_phase = 1.5707963267948966;
  double tilt_angle = -1.0;         // optional; with tilt_time >= 0 reports the phase
  double tilt_time = -1.0;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::custom;
  std::uint64_t seed = 0;  // reserved; the pipeline is deterministic
  ModelSection model;
  ProtocolSection protocol;
  InitialSection initial;
  SweepSection sweep;
  BandsSection bands;
  GradiometerSection gradiometer;
  std::string out_dir = "latkick-out";
  std::string source_text;  // raw config, echoed into the manifest
};

/// Parses and fully validates a config; throws validation_error with
/// line/key diagnostics. Nothing is written to disk on failure.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::filesystem::path& path);

struct OutputRecord {
  std::string name;
  std::uint64_t bytes = 0;
  std::string fnv1a64;  // hex
};

struct RunManifest {
  std::string scenario;
  std::string version;
  std::string started_utc;
  double wall_seconds = 0.0;
  std::vector<OutputRecord> outputs;
  std::filesystem::path directory;
};

/// Executes the scenario and writes its CSV tables plus manifest.json under
/// config.out_dir. All outputs are computed before anything is written.
RunManifest run_scenario(const ScenarioConfig& config);

struct PresetInfo {
  std::string name;
  std::string description;
};

/// Shipped presets, stable order and content.
const std::vector<PresetInfo>& list_presets();

/// Config text of a shipped preset; throws validation_error for unknown names.
std::string preset_config_text(const std::string& name);

/// Thread cap for sweep execution: LATKICK_THREADS, else hardware concurrency.
int thread_cap();

struct GradiometerParams;  // metrology.hpp

/// Resolves species shorthands (rb87: atomic mass, a = 390 nm; cr52: six Bohr
/// magnetons, a = 532 nm) into concrete SI coupling parameters.
GradiometerParams resolve_gradiometer(const GradiometerSection& section);

}  // namespace latkick
