#include <gtest/gtest.h>
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "nlus/io/scenarios.hpp"

using namespace nlus;
using namespace nlus::io;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("nlus_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args, const fs::path& err_file) {
  const std::string cmd = std::string(NLUS_CLI_PATH) + " " + args + " > /dev/null 2> " + err_file.string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Table catalog_table(const Config& cfg) { return parse_csv(run_catalog(cfg).files.at(0).content); }

}  // namespace

TEST(Csv, NumberRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int i = 0; i < 10000; ++i) {
    const double v = std::ldexp(mant(rng), expo(rng));
    EXPECT_EQ(parse_number(format_number(v)), v);
  }
  EXPECT_EQ(parse_number(format_number(std::numeric_limits<double>::denorm_min())),
            std::numeric_limits<double>::denorm_min());
}

TEST(Csv, TableRoundTripWithEmptyCells) {
  Table t{{"a", "b"}, {{0.1, Cell{}}, {Cell{}, -2.5e-300}, {1.0 / 3.0, 7.0}}};
  const auto text = to_csv(t);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(text.back(), '\n');
  const auto back = parse_csv(text);
  EXPECT_EQ(back.header, t.header);
  ASSERT_EQ(back.rows.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(back.rows[i][j], t.rows[i][j]);
}

TEST(Csv, RejectsMalformedNumbers) {
  EXPECT_THROW(parse_number("1.2.3"), DomainError);
  EXPECT_THROW(parse_number("abc"), DomainError);
  EXPECT_THROW(parse_csv("a,b\n1\n"), DomainError);
}

TEST(Csv, TraceRoundTrips) {
  BilinearOscillator o;
  o.gamma = 0.6;
  const auto tr = simulate(o);
  const auto back = time_trace_from_table(parse_csv(to_csv(time_trace_table(tr))));
  EXPECT_EQ(back.x, tr.x);
  EXPECT_EQ(back.v, tr.v);
  EXPECT_EQ(back.dt, tr.dt);

  const auto creep = integrate_creep(CreepModel{});
  const auto cb = creep_from_table(parse_csv(to_csv(creep_table(creep))));
  ASSERT_EQ(cb.samples.size(), creep.samples.size());
  EXPECT_EQ(cb.samples.back().eps_p, creep.samples.back().eps_p);
}

TEST(Config, ParsesSectionsCommentsAndDottedKeys) {
  const auto cfg = parse_config("# header\n[creep]\nm = 8   # exponent\nsigma=1.4e8\n\n[relax]\nn=0.25\ncatalog.kind = x\n");
  EXPECT_EQ(cfg.at("creep.m"), "8");
  EXPECT_EQ(cfg.at("creep.sigma"), "1.4e8");
  EXPECT_EQ(cfg.at("relax.n"), "0.25");
  EXPECT_EQ(cfg.at("relax.catalog.kind"), "x");
  EXPECT_THROW(parse_config("[creep\nm=1\n"), ConfigError);
  EXPECT_THROW(parse_config("novalue\n"), ConfigError);
}

TEST(Config, RejectsUnknownAndMisplacedKeys) {
  try {
    run_creep({{"creep.mm", "8"}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "creep.mm");
  }
  EXPECT_THROW(run_creep({{"relax.n", "0.5"}}), ConfigError);
  EXPECT_THROW(run_creep({{"m", "8"}}), ConfigError);
  EXPECT_THROW(run_relax({{"relax.n", "1.5"}}), ConfigError);
  EXPECT_THROW(run_creep({{"creep.m", "eight"}}), ConfigError);
  EXPECT_THROW(run_catalog({{"catalog.family", "Cubic"}}), ConfigError);
  EXPECT_THROW(run_oscillate({{"oscillate.gammas", "0.2,0.1"}}), ConfigError);
  EXPECT_THROW(run_oscillate({{"oscillate.gammas", "0.95"}}), ConfigError);
}

TEST(Scenarios, CatalogRows) {
  const auto t = catalog_table({{"catalog.family", "ArcTanh"}, {"catalog.points", "0,0.5,1"}});
  ASSERT_EQ(t.header, kCatalogColumns);
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_NEAR(*t.rows[1][1], 0.549306, 1e-6);
  EXPECT_NEAR(*t.rows[1][2], 4.0 / 3.0, 1e-12);
  EXPECT_FALSE(t.rows[2][1].has_value());  // divergent endpoint left empty
  EXPECT_FALSE(t.rows[2][2].has_value());

  const auto p = catalog_table(
      {{"catalog.kind", "dissipation"}, {"catalog.family", "Power"}, {"catalog.n", "2"}, {"catalog.points", "0,1"}});
  EXPECT_EQ(*p.rows[1][1], 1.0);
  EXPECT_EQ(*p.rows[1][2], 2.0);
  EXPECT_EQ(catalog_table({}).rows.size(), 101u);
}

TEST(Scenarios, RelaxEndpoint) {
  const auto t = parse_csv(run_relax({{"relax.n", "0.5"}}).files.at(0).content);
  ASSERT_EQ(t.rows.size(), 101u);
  EXPECT_EQ(*t.rows.front()[1], 1.0);
  EXPECT_EQ(*t.rows.front()[2], 1.0);
  EXPECT_NEAR(*t.rows.back()[1], 2.0, 1e-12);
  EXPECT_EQ(*t.rows.back()[2], 0.0);
}

TEST(Scenarios, CreepResidualColumnRechecks) {
  const auto res = run_creep({{"creep.m", "8"}});
  const auto tr = creep_from_table(parse_csv(res.files.at(0).content));
  CreepModel m;
  m.dissipation = DissipationLaw::creep_affine_power(2e6, 2e6, 8.0);
  for (const auto& s : tr.samples) EXPECT_LT(stress_residual(m, s.gamma, s.eps_elastic), 1e-9 * m.sigma);
  EXPECT_EQ(res.params["m"], 8.0);
}

TEST(Scenarios, InfeasibleCreepIsReported) {
  EXPECT_THROW(run_creep({{"creep.K", "0"}}), InfeasibleError);
}

TEST(Scenarios, OscillateSweepFile) {
  const auto res = run_oscillate({{"oscillate.gammas", "0.2,0.6"}, {"oscillate.traces", "false"}});
  ASSERT_EQ(res.files.size(), 3u);
  EXPECT_EQ(res.files[0].name, "oscillate_sweep.csv");
  const auto sw = sweep_from_table(parse_csv(res.files[0].content));
  ASSERT_EQ(sw.samples.size(), 2u);
  EXPECT_GT(sw.samples[1].ratio, sw.samples[0].ratio);
  EXPECT_TRUE(res.warnings.empty());
}

TEST(Execute, DeterministicOutputsAndManifest) {
  const auto d1 = scratch("det1"), d2 = scratch("det2");
  Invocation inv{"relax", {{"relax.family", "RelaxExp"}, {"relax.n", "4"}}, std::nullopt, d1, true};
  const auto a = execute(inv);
  inv.out_dir = d2;
  const auto b = execute(inv);
  EXPECT_EQ(a.manifest, b.manifest);
  EXPECT_EQ(read_file(d1 / "relax.csv"), read_file(d2 / "relax.csv"));
  const auto m = nlohmann::json::parse(read_file(d1 / "manifest.json"));
  EXPECT_EQ(m["tool"], "nlus");
  EXPECT_EQ(m["outputs"]["relax.csv"], sha256_hex(read_file(d1 / "relax.csv")));
  EXPECT_TRUE(fs::exists(d1 / "plot.py"));
  EXPECT_FALSE(fs::exists(d1 / "relax.csv.tmp"));
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST(Execute, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Execute, GridChangesDigest) {
  const auto d = scratch("grid");
  Invocation inv{"catalog", {}, std::nullopt, d, false};
  const auto a = execute(inv);
  inv.grid = 50;
  const auto b = execute(inv);
  EXPECT_NE(a.manifest["config_digest"], b.manifest["config_digest"]);
  EXPECT_EQ(parse_csv(read_file(d / "catalog.csv")).rows.size(), 51u);
  fs::remove_all(d);
}

TEST(Presets, AllFiguresRunQuickly) {
  const auto d = scratch("presets");
  for (const auto& [name, runs] : presets()) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = execute({"preset " + name, {}, std::nullopt, d, false});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_LT(secs, 60.0) << name;
    EXPECT_GE(rep.written.size(), runs.size() + 1) << name;
  }
  for (int i : {2, 3, 4, 5, 6, 7, 8, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21})
    EXPECT_TRUE(presets().contains("fig" + std::to_string(i))) << i;
  EXPECT_TRUE(fs::exists(d / "fig18_m16.csv"));
  EXPECT_TRUE(fs::exists(d / "fig20_sigma100e6.csv"));
  fs::remove_all(d);
}

TEST(Presets, UserConfigCannotOverrideSweptKey) {
  const auto d = scratch("pin");
  execute({"preset fig18", {{"creep.m", "3"}, {"creep.steps", "1000"}}, std::nullopt, d, false});
  EXPECT_EQ(parse_csv(read_file(d / "fig18_m4.csv")).rows.size(), 1001u);
  const auto m = nlohmann::json::parse(read_file(d / "manifest.json"));
  EXPECT_EQ(m["runs"][1]["params"]["m"], 4.0);
  fs::remove_all(d);
}

TEST(Cli, ExitCodes) {
  const auto d = scratch("cli");
  const auto err = d / "stderr.txt";
  EXPECT_EQ(run_cli("relax --out " + d.string(), err), kExitOk);
  EXPECT_TRUE(fs::exists(d / "relax.csv"));

  EXPECT_EQ(run_cli("creep --set creep.bogus=1 --out " + d.string(), err), kExitConfig);
  const auto rec = nlohmann::json::parse(read_file(err));
  EXPECT_EQ(rec["code"], kExitConfig);
  EXPECT_EQ(rec["field"], "creep.bogus");

  EXPECT_EQ(run_cli("creep --set creep.K=0 --out " + d.string(), err), kExitInfeasible);
  EXPECT_EQ(nlohmann::json::parse(read_file(err))["error"], error_kind(kExitInfeasible));

  EXPECT_EQ(run_cli("frobnicate", err), kExitConfig);
  EXPECT_EQ(run_cli("preset fig99 --out " + d.string(), err), kExitConfig);
  EXPECT_EQ(run_cli("--version", err), kExitOk);
  fs::remove_all(d);
}

TEST(Cli, ConfigFileAndEnvironmentOutDir) {
  const auto d = scratch("cfg");
  write_atomic(d / "run.cfg", "[catalog]\nfamily = PolyBump\nn = 2\ngrid = 10\n");
  const auto err = d / "stderr.txt";
  const std::string env = "NLUS_OUT_DIR=" + (d / "env").string() + " ";
  const int status = std::system((env + NLUS_CLI_PATH + " catalog --config " + (d / "run.cfg").string() +
                                  " > /dev/null 2> " + err.string())
                                     .c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
  const auto t = parse_csv(read_file(d / "env" / "catalog.csv"));
  EXPECT_EQ(t.rows.size(), 11u);
  fs::remove_all(d);
}
