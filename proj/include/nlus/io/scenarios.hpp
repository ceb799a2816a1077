#pragma once

/**
 * @file scenarios.hpp
 *
 * @brief Scenario drivers behind the command-line tool.
 *
 * Each run_* resolves its section of a Config, delegates to the owning
 * solver and returns the CSV artifacts in memory. execute() writes them
 * atomically together with a manifest.json holding the resolved parameters,
 * the config digest and a checksum per output file.
 */

#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlus/catalog.hpp"
#include "nlus/creep.hpp"
#include "nlus/errors.hpp"
#include "nlus/grid.hpp"
#include "nlus/io/config.hpp"
#include "nlus/io/csv.hpp"
#include "nlus/io/manifest.hpp"
#include "nlus/oscillator.hpp"
#include "nlus/relaxation.hpp"

namespace nlus::io {

struct Artifact {
  std::string name;
  std::string content;
};

struct RunResult {
  std::string subcommand;
  nlohmann::ordered_json params;
  std::vector<Artifact> files;
  std::vector<std::string> warnings;
};

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitInfeasible = 3, kExitNumerical = 4 };

/// Named exit status for an error raised by a run.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InfeasibleError*>(&e)) return kExitInfeasible;
  if (dynamic_cast<const NumericalError*>(&e) || dynamic_cast<const DivergenceError*>(&e)) return kExitNumerical;
  return kExitConfig;
}

inline std::string error_kind(int code) {
  switch (code) {
    case kExitConfig: return "config";
    case kExitInfeasible: return "infeasible";
    case kExitNumerical: return "numerical";
    default: return "ok";
  }
}

namespace detail {

/// Reads a number and checks it, reporting the dotted field path.
template <typename Pred>
double checked(ParamReader& r, const std::string& name, double fallback, Pred ok, const char* rule) {
  const double v = r.number(name, fallback);
  if (!std::isfinite(v) || !ok(v)) throw ConfigError(r.full(name), std::string("must be ") + rule);
  return v;
}

inline bool positive(double v) { return v > 0.0; }
inline bool non_negative(double v) { return v >= 0.0; }

inline std::size_t intervals(ParamReader& r, const std::string& name, double fallback, std::optional<std::size_t> grid) {
  const double v = checked(r, name, fallback, [](double x) { return x >= 1.0 && x == std::floor(x); },
                           "a positive integer");
  if (grid) {
    if (*grid < 1) throw ConfigError("--grid", "must be >= 1");
    return *grid;
  }
  return static_cast<std::size_t>(v);
}

/// Shortest round-trip text of a number, for file names.
inline std::string tag(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline RunResult run_catalog(const Config& cfg, std::optional<std::size_t> grid = {}, const std::string& stem = "catalog") {
  ParamReader r(cfg, "catalog");
  const auto kind = r.text("kind", "nonlinearity");
  std::function<double(double)> value, slope;
  double scale = 1.0;

  if (kind == "nonlinearity") {
    const auto name = r.text("family", "ArcTanh");
    const auto fam = parse_nonlinearity_family(name);
    if (!fam) throw ConfigError(r.full("family"), "unknown nonlinearity family '" + name + "'");
    const double A0 = detail::checked(r, "A0", 1.0, [](double v) { return v != 0.0; }, "nonzero");
    std::optional<NonlinearityLaw> law;
    switch (*fam) {
      case NonlinearityFamily::ArcTanh: law = NonlinearityLaw::arctanh(A0); break;
      case NonlinearityFamily::Constant: law = NonlinearityLaw::constant(A0); break;
      case NonlinearityFamily::TanhAsymptotic: {
        const double m = detail::checked(r, "m", 2.0, [](double v) { return v >= 1.0; }, ">= 1");
        const double n = detail::checked(r, "n", 2.0, detail::positive, "> 0");
        law = NonlinearityLaw::tanh_asymptotic(A0, m, n);
        break;
      }
      case NonlinearityFamily::PolyBump:
        law = NonlinearityLaw::poly_bump(A0, detail::checked(r, "n", 2.0, detail::positive, "> 0"));
        break;
      case NonlinearityFamily::ExpBump:
        law = NonlinearityLaw::exp_bump(A0, detail::checked(r, "n", 2.0, detail::positive, "> 0"));
        break;
    }
    value = [law](double g) { return law->value(g); };
    slope = [law](double g) { return law->derivative(g); };
    scale = A0;
  } else if (kind == "dissipation") {
    const auto name = r.text("family", "Power");
    const auto fam = parse_dissipation_family(name);
    if (!fam) throw ConfigError(r.full("family"), "unknown dissipation family '" + name + "'");
    std::optional<DissipationLaw> law;
    auto W0 = [&] { return detail::checked(r, "W0", 1.0, detail::positive, "> 0"); };
    auto n = [&](double fallback) { return detail::checked(r, "n", fallback, detail::positive, "> 0"); };
    switch (*fam) {
      case DissipationFamily::Power: { const double w = W0(); law = DissipationLaw::power(w, n(2.0)); break; }
      case DissipationFamily::OneMinusPower: { const double w = W0(); law = DissipationLaw::one_minus_power(w, n(0.5)); break; }
      case DissipationFamily::ArcTanhLog: law = DissipationLaw::arctanh_log(W0()); break;
      case DissipationFamily::RelaxPolyline: {
        const double w = W0();
        law = DissipationLaw::relax_polyline(
            w, detail::checked(r, "n", 0.5, [](double v) { return v > 0.0 && v < 1.0; }, "in (0, 1)"));
        break;
      }
      case DissipationFamily::RelaxExp: { const double w = W0(); law = DissipationLaw::relax_exp(w, n(2.0)); break; }
      case DissipationFamily::CreepAffinePower: {
        const double K = detail::checked(r, "K", 1.0, detail::non_negative, ">= 0");
        const double w = detail::checked(r, "W0", 1.0, detail::non_negative, ">= 0");
        const double m = detail::checked(r, "m", 2.0, [](double v) { return v >= 1.0; }, ">= 1");
        if (K + w <= 0.0) throw ConfigError(r.full("K"), "K + W0 must be > 0");
        law = DissipationLaw::creep_affine_power(K, w, m);
        break;
      }
    }
    value = [law](double g) { return law->value(g); };
    slope = [law](double g) { return law->derivative(g); };
    scale = law->scale();
  } else {
    throw ConfigError(r.full("kind"), "expected nonlinearity or dissipation");
  }

  const auto n_int = detail::intervals(r, "grid", 100, grid);
  auto points = r.numbers("points", {});
  r.finish();
  if (points.empty()) points = uniform_grid(0.0, 1.0, n_int);
  for (double g : points)
    if (!(g >= 0.0 && g <= 1.0)) throw ConfigError(r.full("points"), "values must lie in [0, 1]");

  Table t{kCatalogColumns, {}};
  for (double g : points) {
    Cell v, d;
    try { v = value(g) / scale; } catch (const DivergenceError&) {}
    try { d = slope(g) / scale; } catch (const DivergenceError&) {}
    t.rows.push_back({g, v, d});
  }
  return {"catalog", r.resolved(), {{stem + ".csv", to_csv(t)}}, {}};
}

inline SpringModel spring_from(ParamReader& r) {
  const auto name = r.text("family", "RelaxPolyline");
  const auto fam = parse_dissipation_family(name);
  if (!fam || (*fam != DissipationFamily::RelaxPolyline && *fam != DissipationFamily::RelaxExp))
    throw ConfigError(r.full("family"), "expected RelaxPolyline or RelaxExp");
  const double n = *fam == DissipationFamily::RelaxPolyline
                       ? detail::checked(r, "n", 0.5, [](double v) { return v > 0.0 && v < 1.0; }, "in (0, 1)")
                       : detail::checked(r, "n", 2.0, detail::positive, "> 0");
  const double k0 = detail::checked(r, "k0", 1.0, detail::positive, "> 0");
  const double x0 = detail::checked(r, "x0_initial", 1.0, [](double) { return true; }, "finite");
  const double xm = detail::checked(r, "x_m", 2.0, [x0](double v) { return v > x0; }, "> x0_initial");
  const double mass = detail::checked(r, "mass", 1.0, detail::positive, "> 0");
  return SpringModel::make(k0, x0, xm, mass, *fam, n);
}

inline RunResult run_relax(const Config& cfg, std::optional<std::size_t> grid = {}, const std::string& stem = "relax") {
  ParamReader r(cfg, "relax");
  const auto spring = spring_from(r);
  const auto n_int = detail::intervals(r, "grid", 100, grid);
  r.finish();
  const auto g = uniform_grid(0.0, 1.0, n_int);
  const auto trace = relaxation_sweep(spring, g);
  return {"relax", r.resolved(), {{stem + ".csv", to_csv(relaxation_table(spring, trace))}}, {}};
}

inline RunResult run_oscillate(const Config& cfg, std::optional<std::size_t> grid = {},
                               const std::string& stem = "oscillate") {
  ParamReader r(cfg, "oscillate");
  auto gammas = r.numbers("gammas", {0.0, 0.2, 0.6, 0.8});
  OscillatorSetup setup;
  setup.mass = detail::checked(r, "mass", 1.0, detail::positive, "> 0");
  setup.k0 = detail::checked(r, "k0", 4.0 * std::numbers::pi * std::numbers::pi, detail::positive, "> 0");
  const double x0 = detail::checked(r, "x0", 1.0, detail::positive, "> 0");
  setup.x0_of_gamma = [x0](double) { return x0; };
  setup.initial_factor =
      detail::checked(r, "initial_factor", 0.99, [](double v) { return v > 0.0 && v != 1.0; }, "positive and != 1");
  setup.periods = detail::checked(r, "periods", 64.0, [](double v) { return v >= kMinPeriods; }, ">= 64");
  setup.samples_per_period = detail::checked(r, "samples_per_period", 512.0, [](double v) { return v >= 200.0; }, ">= 200");
  const bool traces = r.flag("traces", true);
  const bool spectra = r.flag("spectra", true);
  r.finish();
  if (grid) {
    if (*grid < 1) throw ConfigError("--grid", "must be >= 1");
    gammas = uniform_grid(0.0, kMaxSweepGamma, *grid);
  }
  if (gammas.empty()) throw ConfigError(r.full("gammas"), "at least one value required");
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] >= 0.0 && gammas[i] <= kMaxSweepGamma))
      throw ConfigError(r.full("gammas"), "values must lie in [0, 0.9]");
    if (i > 0 && !(gammas[i] > gammas[i - 1])) throw ConfigError(r.full("gammas"), "values must be strictly increasing");
  }

  RunResult out{"oscillate", r.resolved(), {}, {}};
  HarmonicSweep sweep;
  for (double g : gammas) {
    const auto osc = setup.at(g);
    const auto run = default_run(osc, setup.periods, setup.samples_per_period);
    const auto trace = simulate(osc, run.duration, run.dt);
    const auto s = spectrum(trace);
    sweep.samples.push_back({g, s.f1, s.A1, s.A2, s.ratio});
    if (traces) out.files.push_back({stem + "_trace_gamma" + detail::tag(g) + ".csv", to_csv(time_trace_table(trace))});
    if (spectra) out.files.push_back({stem + "_spectrum_gamma" + detail::tag(g) + ".csv", to_csv(spectrum_table(s))});
  }
  for (std::size_t i = 1; i < sweep.samples.size(); ++i)
    if (!(sweep.samples[i].ratio > sweep.samples[i - 1].ratio))
      out.warnings.push_back("second-harmonic ratio not increasing at gamma = " + detail::tag(sweep.samples[i].gamma));
  for (std::size_t i = 1; i + 1 < sweep.samples.size(); ++i) {
    const auto &a = sweep.samples[i - 1], &b = sweep.samples[i], &c = sweep.samples[i + 1];
    if (!((c.ratio - b.ratio) / (c.gamma - b.gamma) > (b.ratio - a.ratio) / (b.gamma - a.gamma)))
      out.warnings.push_back("second-harmonic growth not convex at gamma = " + detail::tag(b.gamma));
  }
  out.files.insert(out.files.begin(), {stem + "_sweep.csv", to_csv(sweep_table(sweep))});
  return out;
}

inline CreepModel creep_from(ParamReader& r) {
  CreepModel m;
  m.E0 = detail::checked(r, "E0", 70e9, detail::positive, "> 0");
  m.a = detail::checked(r, "a", 0.5, [](double v) { return v > 0.0 && v <= 1.0; }, "in (0, 1]");
  m.sigma = detail::checked(r, "sigma", 140e6, detail::positive, "> 0");
  const double A0 = detail::checked(r, "A0", -3.5e11, [](double v) { return v != 0.0; }, "nonzero");
  const double n = detail::checked(r, "n", 2.0, detail::positive, "> 0");
  m.nonlinearity = NonlinearityLaw::exp_bump(A0, n);
  const auto scaling = r.text("dissipation_scaling", "fixed");
  double K = 0.0, W0 = 0.0;
  if (scaling == "fixed") {
    K = detail::checked(r, "K", 2e6, detail::non_negative, ">= 0");
    W0 = detail::checked(r, "W0", 2e6, detail::non_negative, ">= 0");
  } else if (scaling == "stress_squared") {
    K = W0 = stress_scaled_dissipation(m.sigma);
  } else {
    throw ConfigError(r.full("dissipation_scaling"), "expected fixed or stress_squared");
  }
  const double mexp = detail::checked(r, "m", 16.0, [](double v) { return v >= 2.0; }, ">= 2");
  m.dissipation = DissipationLaw::creep_affine_power(K, W0, mexp);
  return m;
}

inline RunResult run_creep(const Config& cfg, std::optional<std::size_t> grid = {}, const std::string& stem = "creep") {
  ParamReader r(cfg, "creep");
  const auto model = creep_from(r);
  const double gmax =
      detail::checked(r, "gamma_max", kMaxCreepGamma, [](double v) { return v > 0.0 && v <= kMaxCreepGamma; }, "in (0, 0.999]");
  const double steps_cfg = detail::checked(r, "steps", 4000.0, [](double v) { return v >= 1000.0 && v == std::floor(v); },
                                           "an integer >= 1000");
  r.finish();
  std::size_t steps = static_cast<std::size_t>(steps_cfg);
  if (grid) {
    if (*grid < kMinCreepSteps) throw ConfigError("--grid", "creep needs at least 1000 steps");
    steps = *grid;
  }
  const auto trace = integrate_creep(model, gmax, steps);
  if (!trace.valid)
    throw InfeasibleError(trace.failure + " (" + std::to_string(trace.samples.size()) + " samples accepted)");
  return {"creep", r.resolved(), {{stem + ".csv", to_csv(creep_table(trace))}}, {}};
}

inline RunResult run_subcommand(const std::string& sub, const Config& cfg, std::optional<std::size_t> grid,
                                const std::string& stem) {
  if (sub == "catalog") return run_catalog(cfg, grid, stem);
  if (sub == "relax") return run_relax(cfg, grid, stem);
  if (sub == "oscillate") return run_oscillate(cfg, grid, stem);
  if (sub == "creep") return run_creep(cfg, grid, stem);
  throw ConfigError("", "unknown subcommand '" + sub + "'");
}

// ---------------------------------------------------------------------------
// Figure presets.

struct PresetRun {
  std::string subcommand;
  Config settings;  ///< defaults the user config may override
  std::string stem;
  Config pinned{};  ///< swept values, applied last
};

namespace detail {

inline std::vector<PresetRun> sweep_param(const std::string& sub, const std::string& stem, Config base,
                                          const std::string& key, const std::vector<std::string>& values) {
  std::vector<PresetRun> runs;
  for (const auto& v : values) {
    runs.push_back({sub, base, stem + "_" + key + v, {{sub + "." + key, v}}});
  }
  return runs;
}

}  // namespace detail

inline std::map<std::string, std::vector<PresetRun>> presets() {
  using detail::sweep_param;
  std::map<std::string, std::vector<PresetRun>> p;
  const Config nl{{"catalog.kind", "nonlinearity"}};
  const Config ds{{"catalog.kind", "dissipation"}};
  auto with = [](Config c, const std::string& k, const std::string& v) {
    c[k] = v;
    return c;
  };
  p["fig2"] = {{"catalog", with(nl, "catalog.family", "ArcTanh"), "fig2"}};
  p["fig3"] = sweep_param("catalog", "fig3", with(with(nl, "catalog.family", "TanhAsymptotic"), "catalog.m", "2"), "n",
                          {"1", "2", "5", "10"});
  p["fig4"] = sweep_param("catalog", "fig4", with(nl, "catalog.family", "PolyBump"), "n", {"0.5", "1", "2", "4"});
  p["fig5"] = sweep_param("catalog", "fig5", with(nl, "catalog.family", "ExpBump"), "n", {"0.5", "1", "2", "4"});
  p["fig6"] = sweep_param("catalog", "fig6", with(ds, "catalog.family", "Power"), "n", {"2", "3", "4"});
  p["fig7"] = sweep_param("catalog", "fig7", with(ds, "catalog.family", "OneMinusPower"), "n", {"0.25", "0.5", "0.75"});
  p["fig8"] = {{"catalog", with(ds, "catalog.family", "ArcTanhLog"), "fig8"}};

  const Config case1{{"relax.family", "RelaxPolyline"}};
  const Config case2{{"relax.family", "RelaxExp"}};
  p["fig11"] = sweep_param("relax", "fig11", case1, "n", {"0.25", "0.5", "0.75"});
  p["fig12"] = sweep_param("relax", "fig12", case1, "n", {"0.25", "0.5", "0.75"});
  p["fig13"] = sweep_param("relax", "fig13", case2, "n", {"1", "2", "4"});
  p["fig14"] = sweep_param("relax", "fig14", case2, "n", {"1", "2", "4"});

  p["fig15"] = {{"oscillate", {{"oscillate.gammas", "0,0.2,0.6,0.8"}, {"oscillate.spectra", "false"}}, "fig15"}};
  p["fig16"] = {{"oscillate", {{"oscillate.gammas", "0,0.2,0.6,0.8"}, {"oscillate.traces", "false"}}, "fig16"}};
  p["fig17"] = {{"oscillate",
                 {{"oscillate.gammas", "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"},
                  {"oscillate.traces", "false"},
                  {"oscillate.spectra", "false"}},
                 "fig17"}};

  const Config creep1{{"creep.K", "2e6"}, {"creep.W0", "2e6"}, {"creep.sigma", "140e6"}};
  p["fig18"] = sweep_param("creep", "fig18", creep1, "m", {"2", "4", "8", "16"});
  p["fig19"] = sweep_param("creep", "fig19", creep1, "m", {"2", "4", "8", "16"});
  const Config creep2{{"creep.dissipation_scaling", "stress_squared"}, {"creep.m", "16"}};
  p["fig20"] = sweep_param("creep", "fig20", creep2, "sigma", {"100e6", "140e6", "180e6"});
  p["fig21"] = sweep_param("creep", "fig21", creep2, "sigma", {"100e6", "140e6", "180e6"});
  return p;
}

// ---------------------------------------------------------------------------

struct Invocation {
  std::string command;  ///< subcommand, or "preset <name>"
  Config config;        ///< user config after --set overrides
  std::optional<std::size_t> grid;
  std::filesystem::path out_dir = "out";
  bool plot_stub = false;
};

struct ExecutionReport {
  std::vector<std::filesystem::path> written;
  std::vector<std::string> warnings;
  nlohmann::ordered_json manifest;
};

inline std::string plot_stub_script(const std::vector<std::string>& csv_names) {
  std::string s =
      "# Plot helper: first column against every other column of each CSV.\n"
      "import csv\nimport matplotlib.pyplot as plt\n\nFILES = [\n";
  for (const auto& n : csv_names) s += "    \"" + n + "\",\n";
  s +=
      "]\n\nfor name in FILES:\n"
      "    with open(name) as f:\n"
      "        rows = list(csv.reader(f))\n"
      "    head, body = rows[0], rows[1:]\n"
      "    fig, ax = plt.subplots()\n"
      "    for j in range(1, len(head)):\n"
      "        pts = [(float(r[0]), float(r[j])) for r in body if r[j] != \"\"]\n"
      "        ax.plot([p[0] for p in pts], [p[1] for p in pts], label=head[j])\n"
      "    ax.set_xlabel(head[0])\n    ax.legend()\n    ax.set_title(name)\n"
      "    fig.savefig(name.replace(\".csv\", \".png\"))\n";
  return s;
}

/// Runs a subcommand or preset and writes its CSVs plus manifest.json.
inline ExecutionReport execute(const Invocation& inv) {
  std::vector<RunResult> results;
  std::vector<Config> effective;
  if (inv.command.rfind("preset ", 0) == 0) {
    const auto name = inv.command.substr(7);
    const auto all = presets();
    const auto it = all.find(name);
    if (it == all.end()) throw ConfigError("preset", "unknown preset '" + name + "'");
    for (const auto& run : it->second) {
      Config c = run.settings;
      for (const auto& [k, v] : inv.config) c[k] = v;
      for (const auto& [k, v] : run.pinned) c[k] = v;
      results.push_back(run_subcommand(run.subcommand, c, inv.grid, run.stem));
      effective.push_back(c);
    }
  } else {
    results.push_back(run_subcommand(inv.command, inv.config, inv.grid, inv.command));
    effective.push_back(inv.config);
  }

  std::string canonical;
  for (const auto& c : effective) canonical += canonical_text(c) + "--\n";
  if (inv.grid) canonical += "grid=" + std::to_string(*inv.grid) + "\n";

  nlohmann::ordered_json manifest;
  manifest["tool"] = "nlus";
  manifest["version"] = std::string(kToolVersion);
  manifest["command"] = inv.command;
  manifest["config_digest"] = sha256_hex(canonical);
  manifest["runs"] = nlohmann::ordered_json::array();
  manifest["outputs"] = nlohmann::ordered_json::object();

  ExecutionReport report;
  std::vector<std::string> csv_names;
  for (const auto& res : results) {
    manifest["runs"].push_back({{"subcommand", res.subcommand}, {"params", res.params}});
    for (const auto& f : res.files) {
      const auto path = inv.out_dir / f.name;
      write_atomic(path, f.content);
      manifest["outputs"][f.name] = sha256_hex(f.content);
      report.written.push_back(path);
      csv_names.push_back(f.name);
    }
    report.warnings.insert(report.warnings.end(), res.warnings.begin(), res.warnings.end());
  }
  if (inv.plot_stub) {
    const auto path = inv.out_dir / "plot.py";
    write_atomic(path, plot_stub_script(csv_names));
    report.written.push_back(path);
  }
  const auto mpath = inv.out_dir / "manifest.json";
  write_atomic(mpath, manifest.dump(2) + "\n");
  report.written.push_back(mpath);
  report.manifest = std::move(manifest);
  return report;
}

}  // namespace nlus::io
