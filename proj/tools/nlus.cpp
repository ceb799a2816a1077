// Command-line front end: catalog | relax | oscillate | creep | preset <name>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "nlus/io/scenarios.hpp"

namespace {

int report_error(const std::exception& e) {
  const int code = nlus::io::exit_code_for(e);
  nlohmann::ordered_json rec;
  rec["error"] = nlus::io::error_kind(code);
  rec["code"] = code;
  if (const auto* ce = dynamic_cast<const nlus::ConfigError*>(&e)) rec["field"] = ce->field();
  rec["message"] = e.what();
  std::cerr << rec.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Damage-state simulations for nonlinear ultrasonics: constitutive catalogs, relaxation, "
               "bilinear-oscillator harmonics and creep-like degradation."};
  app.set_version_flag("--version", std::string(nlus::io::kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  int grid = 0;
  std::vector<std::string> overrides;
  bool plot_stub = false;
  app.add_option("--config", config_path, "Flat key = value scenario file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory (default $NLUS_OUT_DIR or ./out)");
  app.add_option("--grid", grid, "Grid resolution: intervals (catalog, relax, oscillate) or steps (creep)")
      ->check(CLI::PositiveNumber);
  app.add_option("--set", overrides, "Override one key, e.g. --set creep.m=8 (repeatable)");
  app.add_flag("--plot-stub", plot_stub, "Also write a matplotlib script referencing the CSVs");

  app.add_subcommand("catalog", "Tabulate a nonlinearity or dissipation law over a damage grid");
  app.add_subcommand("relax", "Stress relaxation of the degrading spring");
  app.add_subcommand("oscillate", "Bilinear oscillator time traces, spectra and second-harmonic sweep");
  app.add_subcommand("creep", "Creep strain versus damage at constant stress");
  auto* preset = app.add_subcommand("preset", "Regenerate the data of one figure (fig2 ... fig21)");
  std::string preset_name;
  preset->add_option("name", preset_name, "Preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : nlus::io::kExitConfig;
  }

  try {
    nlus::io::Invocation inv;
    const auto* sub = app.get_subcommands().front();
    inv.command = sub->get_name() == "preset" ? "preset " + preset_name : sub->get_name();
    if (!config_path.empty()) inv.config = nlus::io::parse_config(nlus::io::read_file(config_path));
    for (const auto& o : overrides) nlus::io::apply_assignment(inv.config, o);
    if (grid > 0) inv.grid = static_cast<std::size_t>(grid);
    if (!out_dir.empty())
      inv.out_dir = out_dir;
    else if (const char* env = std::getenv("NLUS_OUT_DIR"); env && *env)
      inv.out_dir = env;
    inv.plot_stub = plot_stub;

    const auto report = nlus::io::execute(inv);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& p : report.written) std::cout << p.string() << "\n";
  } catch (const std::exception& e) {
    return report_error(e);
  }
  return nlus::io::kExitOk;
}
