// latkick command line: scenario runner for lattice momentum-boost
// condensate-fraction diagnostics.
//
//   latkick run <config>           execute a config file
//   latkick preset <name> [--out]  execute a shipped preset
//   latkick list-presets           show shipped presets
//   latkick gradiometer ...        quick gradiometer calculator
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "latkick/errors.hpp"
#include "latkick/metrology.hpp"
#include "latkick/scenario.hpp"
#include "latkick/version.hpp"

namespace {

void print_manifest(const latkick::RunManifest& m) {
  std::printf("scenario %s finished in %.2f s; %zu output(s) in %s\n", m.scenario.c_str(),
              m.wall_seconds, m.outputs.size(), m.directory.string().c_str());
  for (const auto& rec : m.outputs) {
    std::printf("  %-32s %8llu bytes  fnv1a64=%s\n", rec.name.c_str(),
                static_cast<unsigned long long>(rec.bytes), rec.fnv1a64.c_str());
  }
}

int run_config_file(const std::string& path) {
  const auto cfg = latkick::parse_config_file(path);
  print_manifest(latkick::run_scenario(cfg));
  return 0;
}

int run_preset(const std::string& name, const std::string& out_dir) {
  auto cfg = latkick::parse_config_text(latkick::preset_config_text(name));
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  print_manifest(latkick::run_scenario(cfg));
  return 0;
}

int run_list_presets() {
  for (const auto& p : latkick::list_presets()) {
    std::printf("%-28s %s\n", p.name.c_str(), p.description.c_str());
  }
  return 0;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int run_gradiometer(const std::string& species, double gradient, double target_phase,
                    double lattice_constant, const std::string& out_dir) {
  std::string text = "[scenario]\nkind = gradiometer\n\n[gradiometer]\nspecies = " + species +
                     "\ngradient = " + num(gradient) +
                     "\ntarget_phase = " + num(target_phase) + "\n";
  if (lattice_constant > 0.0) {
    text += "lattice_constant = " + num(lattice_constant) + "\n";
  }
  text += "\n[output]\ndir = " + (out_dir.empty() ? std::string("latkick-out/gradiometer")
                                                  : out_dir) + "\n";
  const auto cfg = latkick::parse_config_text(text);
  const auto manifest = latkick::run_scenario(cfg);

  const latkick::GradiometerParams p = latkick::resolve_gradiometer(cfg.gradiometer);
  std::printf("species            %s\n", species.c_str());
  std::printf("coupling charge    %.6e (kg or J/T)\n", p.charge);
  std::printf("gradient           %.6e (m/s^2 or T/m)\n", gradient);
  std::printf("lattice constant   %.4e m\n", p.lattice_constant);
  std::printf("target phase       %.6f rad\n", target_phase);
  std::printf("required sin(theta)*T = %.6e s\n",
              latkick::required_tilt_product(p, target_phase));
  print_manifest(manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latkick: 1D lattice momentum-boost condensate-fraction probe"};
  app.set_version_flag("--version", std::string(latkick::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "execute a scenario config file");
  run->add_option("config", config_path, "path to a key = value config file")->required();

  std::string preset_name;
  std::string preset_out;
  auto* preset = app.add_subcommand("preset", "execute a shipped preset");
  preset->add_option("name", preset_name, "preset name (see list-presets)")->required();
  preset->add_option("--out", preset_out, "override the output directory");

  auto* list = app.add_subcommand("list-presets", "list shipped presets");

  std::string species;
  double gradient = 0.0;
  double target_phase = 1.5707963267948966;
  double lattice_constant = 0.0;
  std::string grad_out;
  auto* grad = app.add_subcommand("gradiometer", "tilt-product calculator");
  grad->add_option("--species", species, "rb87 or cr52")
      ->required()
      ->check(CLI::IsMember({"rb87", "cr52"}));
  grad->add_option("--gradient", gradient, "field gradient (m/s^2 for rb87, T/m for cr52)")
      ->required();
  grad->add_option("--target-phase", target_phase, "neighbor phase difference in rad");
  grad->add_option("--lattice-constant", lattice_constant, "override lattice constant in m");
  grad->add_option("--out", grad_out, "output directory for the CSV report");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return run_config_file(config_path);
    if (preset->parsed()) return run_preset(preset_name, preset_out);
    if (list->parsed()) return run_list_presets();
    if (grad->parsed()) {
      return run_gradiometer(species, gradient, target_phase, lattice_constant, grad_out);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help / --version
    std::fprintf(stderr, "latkick: %s\n", e.what());
    return 2;
  } catch (const latkick::validation_error& e) {
    std::fprintf(stderr, "latkick: validation error: %s\n", e.what());
    return 2;
  } catch (const latkick::numerical_error& e) {
    std::fprintf(stderr, "latkick: numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "latkick: error: %s\n", e.what());
    return 3;
  }
}
