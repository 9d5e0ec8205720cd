#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "latkick/scenario.hpp"

namespace latkick {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct RawEntry {
  std::string value;
  int line = 0;
  mutable bool consumed = false;
};

class RawConfig {
 public:
  explicit RawConfig(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#' || t[0] == ';') continue;
      if (t.front() == '[') {
        if (t.back() != ']') {
          throw validation_error("config line " + std::to_string(lineno) +
                                 ": malformed section header '" + t + "'");
        }
        section = trim(t.substr(1, t.size() - 2));
        if (section.empty()) {
          throw validation_error("config line " + std::to_string(lineno) +
                                 ": empty section name");
        }
        sections_[section];  // a declared-but-empty section is fine
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos) {
        throw validation_error("config line " + std::to_string(lineno) +
                               ": expected 'key = value', got '" + t + "'");
      }
      if (section.empty()) {
        throw validation_error("config line " + std::to_string(lineno) +
                               ": key outside any [section]");
      }
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      if (key.empty()) {
        throw validation_error("config line " + std::to_string(lineno) + ": empty key");
      }
      auto [it, inserted] = sections_[section].try_emplace(key, RawEntry{value, lineno});
      if (!inserted) {
        throw validation_error("config line " + std::to_string(lineno) + ": duplicate key '" +
                               key + "' in [" + section + "] (first at line " +
                               std::to_string(it->second.line) + ")");
      }
    }
  }

  const RawEntry* find(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    k->second.consumed = true;
    return &k->second;
  }

  void reject_unconsumed() const {
    for (const auto& [sec, entries] : sections_) {
      for (const auto& [key, entry] : entries) {
        if (!entry.consumed) {
          throw validation_error("config line " + std::to_string(entry.line) +
                                 ": unknown or inapplicable key '" + key + "' in [" + sec +
                                 "]");
        }
      }
    }
  }

 private:
  std::map<std::string, std::map<std::string, RawEntry>> sections_;
};

[[noreturn]] void fail_entry(const RawEntry& e, const std::string& what) {
  throw validation_error("config line " + std::to_string(e.line) + ": " + what + " (got '" +
                         e.value + "')");
}

double parse_double(const RawEntry& e) {
  const std::string& s = e.value;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) fail_entry(e, "expected a number");
  return v;
}

std::int64_t parse_int(const RawEntry& e) {
  const std::string& s = e.value;
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) fail_entry(e, "expected an integer");
  return v;
}

std::vector<double> parse_double_list(const RawEntry& e) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(e.value);
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) fail_entry(e, "expected a comma-separated list of numbers");
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
      fail_entry(e, "expected a comma-separated list of numbers");
    }
    out.push_back(v);
  }
  if (out.empty()) fail_entry(e, "expected a non-empty list");
  return out;
}

class Reader {
 public:
  explicit Reader(const RawConfig& raw) : raw_(raw) {}

  double number(const std::string& sec, const std::string& key, double fallback) const {
    const auto* e = raw_.find(sec, key);
    return e != nullptr ? parse_double(*e) : fallback;
  }

  std::int64_t integer(const std::string& sec, const std::string& key,
                       std::int64_t fallback) const {
    const auto* e = raw_.find(sec, key);
    return e != nullptr ? parse_int(*e) : fallback;
  }

  std::string text(const std::string& sec, const std::string& key,
                   const std::string& fallback) const {
    const auto* e = raw_.find(sec, key);
    return e != nullptr ? e->value : fallback;
  }

  std::vector<double> list(const std::string& sec, const std::string& key) const {
    const auto* e = raw_.find(sec, key);
    return e != nullptr ? parse_double_list(*e) : std::vector<double>{};
  }

  const RawEntry* find(const std::string& sec, const std::string& key) const {
    return raw_.find(sec, key);
  }

 private:
  const RawConfig& raw_;
};

ScenarioKind parse_kind(const std::string& s, int line) {
  if (s == "double_well") return ScenarioKind::double_well;
  if (s == "lattice_sweep_n") return ScenarioKind::lattice_sweep_n;
  if (s == "lattice_interacting") return ScenarioKind::lattice_interacting;
  if (s == "ka_sweep") return ScenarioKind::ka_sweep;
  if (s == "bands") return ScenarioKind::bands;
  if (s == "gradiometer") return ScenarioKind::gradiometer;
  if (s == "custom") return ScenarioKind::custom;
  throw validation_error("config line " + std::to_string(line) + ": unknown scenario kind '" +
                         s + "'");
}

void read_model(const Reader& r, ModelSection& m) {
  m.n_atoms = static_cast<int>(r.integer("model", "n_atoms", m.n_atoms));
  m.n_sites = static_cast<int>(r.integer("model", "n_sites", m.n_sites));
  m.hop_J = r.number("model", "hop_J", m.hop_J);
  m.lattice_constant = r.number("model", "lattice_constant", m.lattice_constant);
  if (const auto* e = r.find("model", "boundary")) {
    if (e->value == "open") {
      m.boundary = Boundary::open;
    } else if (e->value == "periodic") {
      m.boundary = Boundary::periodic;
    } else {
      fail_entry(*e, "boundary must be open or periodic");
    }
  }
  if (const auto* e = r.find("model", "site_energies")) {
    m.site_energies = parse_double_list(*e);
  }
  const std::int64_t cap =
      r.integer("model", "max_basis_dim", static_cast<std::int64_t>(m.max_basis_dim));
  if (cap < 1) throw validation_error("config: max_basis_dim must be >= 1");
  m.max_basis_dim = static_cast<std::uint64_t>(cap);
}

void read_protocol(const Reader& r, ProtocolSection& p, bool with_boost) {
  p.probe_U = r.number("protocol", "probe_U", p.probe_U);
  p.total_time = r.number("protocol", "total_time", p.total_time);
  p.dt_sample = r.number("protocol", "dt_sample", p.dt_sample);
  p.tolerance = r.number("protocol", "tolerance", p.tolerance);
  p.smoothing_window = static_cast<int>(r.integer("protocol", "smoothing_window",
                                                  p.smoothing_window));
  if (p.smoothing_window < 0 || (p.smoothing_window > 1 && p.smoothing_window % 2 == 0)) {
    throw validation_error("config: smoothing_window must be 0 (auto) or odd");
  }
  if (!with_boost) return;
  if (const auto* e = r.find("protocol", "boost")) {
    if (e->value == "none") {
      p.boost.kind = BoostSpec::Kind::none;
    } else if (e->value == "imprint_step") {
      p.boost.kind = BoostSpec::Kind::imprint_step;
    } else if (e->value == "imprint_gradient") {
      p.boost.kind = BoostSpec::Kind::imprint_gradient;
    } else if (e->value == "tilt_pulse") {
      p.boost.kind = BoostSpec::Kind::tilt_pulse;
    } else {
      fail_entry(*e, "boost must be none, imprint_step, imprint_gradient or tilt_pulse");
    }
  }
  p.boost.delta_phi = r.number("protocol", "delta_phi", p.boost.delta_phi);
  p.boost.gradient_k = r.number("protocol", "gradient_k", p.boost.gradient_k);
  p.boost.gamma = r.number("protocol", "gamma", p.boost.gamma);
  p.boost.duration = r.number("protocol", "tilt_duration", p.boost.duration);
  p.boost.tilt_steps = static_cast<int>(r.integer("protocol", "tilt_steps",
                                                  p.boost.tilt_steps));
}

void read_initial(const Reader& r, InitialSection& ini) {
  if (const auto* e = r.find("initial", "state")) {
    if (e->value == "ground") {
      ini.kind = InitialSection::Kind::ground;
    } else if (e->value == "superfluid") {
      ini.kind = InitialSection::Kind::superfluid;
    } else if (e->value == "mott") {
      ini.kind = InitialSection::Kind::mott;
    } else {
      fail_entry(*e, "initial state must be ground, superfluid or mott");
    }
  }
  ini.prep_U = r.number("initial", "prep_U", ini.prep_U);
  if (const auto* e = r.find("initial", "mott_filling")) {
    for (double v : parse_double_list(*e)) {
      if (v < 0.0 || v != std::floor(v)) {
        fail_entry(*e, "mott_filling must list non-negative integers");
      }
      ini.mott_filling.push_back(static_cast<std::uint16_t>(v));
    }
  }
}

void validate_lattice_model(const ModelSection& m) {
  BoseHubbardModel bh;
  bh.hop_J = m.hop_J;
  bh.lattice_constant = m.lattice_constant;
  bh.site_energies = m.site_energies;
  bh.boundary = m.boundary;
  bh.validate(m.n_sites);
  // also bounds the basis before any computation starts
  FockBasis::dimension(m.n_atoms, m.n_sites, m.max_basis_dim);
}

QuenchProtocol to_quench_protocol(const ProtocolSection& p) {
  QuenchProtocol q;
  q.boost = p.boost;
  q.probe_U = p.probe_U;
  q.total_time = p.total_time;
  q.dt_sample = p.dt_sample;
  q.propagator_tolerance = p.tolerance;
  return q;
}

}  // namespace

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::double_well: return "double_well";
    case ScenarioKind::lattice_sweep_n: return "lattice_sweep_n";
    case ScenarioKind::lattice_interacting: return "lattice_interacting";
    case ScenarioKind::ka_sweep: return "ka_sweep";
    case ScenarioKind::bands: return "bands";
    case ScenarioKind::gradiometer: return "gradiometer";
    case ScenarioKind::custom: return "custom";
  }
  return "unknown";
}

ScenarioConfig parse_config_text(const std::string& text) {
  RawConfig raw(text);
  Reader r(raw);
  ScenarioConfig cfg;
  cfg.source_text = text;

  const auto* kind_entry = r.find("scenario", "kind");
  if (kind_entry == nullptr) {
    throw validation_error("config: missing required key 'kind' in [scenario]");
  }
  cfg.kind = parse_kind(kind_entry->value, kind_entry->line);
  cfg.seed = static_cast<std::uint64_t>(r.integer("scenario", "seed", 0));
  cfg.out_dir = r.text("output", "dir", cfg.out_dir);
  if (cfg.out_dir.empty()) throw validation_error("config: [output] dir must not be empty");

  switch (cfg.kind) {
    case ScenarioKind::double_well: {
      read_model(r, cfg.model);
      if (cfg.model.n_sites != 2) {
        throw validation_error("config: double_well requires n_sites = 2");
      }
      read_protocol(r, cfg.protocol, true);
      read_initial(r, cfg.initial);
      validate_lattice_model(cfg.model);
      to_quench_protocol(cfg.protocol).validate();
      break;
    }
    case ScenarioKind::lattice_sweep_n:
    case ScenarioKind::lattice_interacting: {
      read_model(r, cfg.model);
      read_protocol(r, cfg.protocol, true);
      cfg.sweep.u_list = r.list("sweep", "u_list");
      if (cfg.sweep.u_list.empty()) {
        throw validation_error("config: [sweep] u_list is required for this scenario");
      }
      if (!std::is_sorted(cfg.sweep.u_list.begin(), cfg.sweep.u_list.end())) {
        throw validation_error("config: u_list must be ascending");
      }
      if (cfg.kind == ScenarioKind::lattice_interacting && cfg.protocol.probe_U <= 0.0) {
        throw validation_error("config: lattice_interacting requires probe_U > 0");
      }
      validate_lattice_model(cfg.model);
      to_quench_protocol(cfg.protocol).validate();
      break;
    }
    case ScenarioKind::ka_sweep: {
      cfg.model.n_atoms = 1;
      read_model(r, cfg.model);
      cfg.protocol.dt_sample = 0.0;  // auto unless given
      read_protocol(r, cfg.protocol, false);
      if (cfg.protocol.probe_U != 0.0) {
        throw validation_error("config: ka_sweep requires probe_U = 0 (the frequency law "
                               "assumes free probe dynamics)");
      }
      cfg.sweep.ka_list = r.list("sweep", "ka_list");
      if (cfg.sweep.ka_list.empty()) {
        throw validation_error("config: [sweep] ka_list is required for ka_sweep");
      }
      for (double ka : cfg.sweep.ka_list) {
        if (ka <= 0.0 || ka >= 3.14159265358979) {
          throw validation_error("config: ka values must lie strictly inside (0, pi)");
        }
      }
      cfg.sweep.record_periods = r.number("sweep", "record_periods", cfg.sweep.record_periods);
      if (cfg.sweep.record_periods < 2.0) {
        throw validation_error("config: record_periods must be >= 2 (need two periods of "
                               "the target component)");
      }
      validate_lattice_model(cfg.model);
      break;
    }
    case ScenarioKind::bands: {
      cfg.bands.V0 = r.number("bands", "V0", cfg.bands.V0);
      cfg.bands.period = r.number("bands", "period", cfg.bands.period);
      cfg.bands.n_cells = static_cast<int>(r.integer("bands", "n_cells", cfg.bands.n_cells));
      cfg.bands.grid_per_cell =
          static_cast<int>(r.integer("bands", "grid_per_cell", cfg.bands.grid_per_cell));
      cfg.bands.n_levels = static_cast<int>(r.integer("bands", "n_levels", 0));
      if (const auto* e = r.find("bands", "boundary")) {
        if (e->value == "periodic") {
          cfg.bands.boundary = Wall::periodic;
        } else if (e->value == "hard_wall") {
          cfg.bands.boundary = Wall::hard_wall;
        } else {
          fail_entry(*e, "bands boundary must be periodic or hard_wall");
        }
      }
      cfg.bands.method = r.text("bands", "method", cfg.bands.method);
      cfg.bands.reference_J = r.number("bands", "reference_J", 0.0);
      cfg.bands.reference_period = r.number("bands", "reference_period", 0.0);
      if (cfg.bands.method != "finite_difference" && cfg.bands.method != "spectral" &&
          cfg.bands.method != "both") {
        throw validation_error(
            "config: bands method must be finite_difference, spectral or both");
      }
      if (cfg.bands.n_levels == 0) cfg.bands.n_levels = cfg.bands.n_cells + 8;
      if (cfg.bands.n_levels < cfg.bands.n_cells) {
        throw validation_error("config: bands n_levels must cover the first band (n_cells)");
      }
      ContinuousLattice lat{cfg.bands.V0, cfg.bands.period, cfg.bands.n_cells,
                            cfg.bands.boundary, cfg.bands.grid_per_cell};
      lat.validate();
      break;
    }
    case ScenarioKind::gradiometer: {
      cfg.gradiometer.species = r.text("gradiometer", "species", cfg.gradiometer.species);
      cfg.gradiometer.charge = r.number("gradiometer", "charge", 0.0);
      cfg.gradiometer.gradient = r.number("gradiometer", "gradient", 0.0);
      cfg.gradiometer.lattice_constant = r.number("gradiometer", "lattice_constant", 0.0);
      cfg.gradiometer.target_phase =
          r.number("gradiometer", "target_phase", cfg.gradiometer.target_phase);
      cfg.gradiometer.tilt_angle = r.number("gradiometer", "tilt_angle", -1.0);
      cfg.gradiometer.tilt_time = r.number("gradiometer", "tilt_time", -1.0);
      const std::string& sp = cfg.gradiometer.species;
      if (sp != "rb87" && sp != "cr52" && sp != "custom") {
        throw validation_error("config: gradiometer species must be rb87, cr52 or custom");
      }
      if (sp == "custom" && cfg.gradiometer.charge <= 0.0) {
        throw validation_error("config: custom gradiometer species requires charge > 0");
      }
      if (cfg.gradiometer.gradient <= 0.0) {
        throw validation_error("config: gradiometer gradient must be > 0");
      }
      if (cfg.gradiometer.target_phase <= 0.0) {
        throw validation_error("config: gradiometer target_phase must be > 0");
      }
      break;
    }
    case ScenarioKind::custom: {
      read_model(r, cfg.model);
      read_protocol(r, cfg.protocol, true);
      read_initial(r, cfg.initial);
      if (!cfg.initial.mott_filling.empty() &&
          static_cast<int>(cfg.initial.mott_filling.size()) != cfg.model.n_sites) {
        throw validation_error("config: mott_filling must list one value per site");
      }
      validate_lattice_model(cfg.model);
      to_quench_protocol(cfg.protocol).validate();
      break;
    }
  }

  raw.reject_unconsumed();
  return cfg;
}

ScenarioConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw validation_error("cannot open config file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace latkick
