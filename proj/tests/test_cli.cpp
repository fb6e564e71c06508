#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ergopt/cli.hpp"

using namespace ergopt;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("ergopt_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Json base_config() {
  Json cfg;
  cfg["system"] = {{"kind", "circle"}, {"m", 2}};
  cfg["observable"] = {{"type", "trig"}, {"terms", {{1, 1.0, 0.0}}}};
  cfg["grid"] = {{"resolution", 1 << 13}};
  cfg["seed"] = 42;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("subaction subcommand writes artifacts and reports alpha") {
  fs::path dir = temp_dir("subaction");
  std::ostringstream out, err;
  int rc = run_subcommand("subaction", base_config(), dir.string(), out, err);
  CHECK(rc == 0);
  CHECK(fs::exists(dir / "u.csv"));
  CHECK(fs::exists(dir / "u.json"));
  CHECK(fs::exists(dir / "schema.json"));
  Json result = Json::parse(slurp(dir / "result.json"));
  CHECK(result["alpha_refined"].get<double>() == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(result["converged"].get<bool>());
  CHECK(result.contains("config_hash"));
  CHECK(result.contains("version"));
  // the CSV carries the same hash in its comment header
  std::string csv = slurp(dir / "u.csv");
  CHECK(csv.find(result["config_hash"].get<std::string>()) != std::string::npos);
}

TEST_CASE("infeasible perturbation constants exit with status 3") {
  fs::path dir = temp_dir("perturb");
  Json cfg = base_config();
  cfg["perturb"] = {{"delta", 1e-3}, {"gamma_delta", 0.1}, {"epsilon", 0.1}, {"M", 2}};
  std::ostringstream out, err;
  int rc = run_subcommand("perturb", cfg, dir.string(), out, err);
  CHECK(rc == 3);
  CHECK(err.str().find("rho exceeds (1-lambda)e0") != std::string::npos);
  Json result = Json::parse(slurp(dir / "result.json"));
  CHECK_FALSE(result["constants"]["feasible"].get<bool>());
}

TEST_CASE("overflow guard on the unstabilized gibbs path exits with status 2") {
  fs::path dir = temp_dir("gibbs");
  Json cfg = base_config();
  cfg["gibbs"] = {{"beta", 1000.0}, {"stabilized", false}};
  std::ostringstream out, err;
  int rc = run_subcommand("gibbs", cfg, dir.string(), out, err);
  CHECK(rc == 2);
  CHECK(err.str().find("normalized stepping") != std::string::npos);

  cfg["gibbs"] = {{"beta", 1000.0}, {"stabilized", true}};
  std::ostringstream out2, err2;
  CHECK(run_subcommand("gibbs", cfg, dir.string(), out2, err2) == 0);
}

TEST_CASE("unknown keys are rejected before any computation") {
  fs::path dir = temp_dir("badkey");
  Json cfg = base_config();
  cfg["grids"] = Json::object();  // typo
  std::ostringstream out, err;
  CHECK(run_subcommand("subaction", cfg, dir.string(), out, err) == 1);
  CHECK(err.str().find("unknown config key") != std::string::npos);

  Json cfg2 = base_config();
  cfg2["grid"] = {{"resolutoin", 64}};
  std::ostringstream out2, err2;
  CHECK(run_subcommand("subaction", cfg2, dir.string(), out2, err2) == 1);

  Json cfg3 = base_config();
  cfg3["observable"] = {{"type", "trig"}, {"terms", {{1, 1.0, 0.0}}}, {"stray", 1}};
  std::ostringstream out3, err3;
  CHECK(run_subcommand("subaction", cfg3, dir.string(), out3, err3) == 1);

  std::ostringstream out4, err4;
  CHECK(run_subcommand("maxorbit", Json{{"system", {{"kind", "circle"}, {"m", 2}}}},
                       dir.string(), out4, err4) == 1);  // missing observable
}

TEST_CASE("non-convergence exits with status 2") {
  fs::path dir = temp_dir("noconv");
  Json cfg = base_config();
  cfg["subaction"] = {{"max_iter", 2}, {"cascade", false}};
  cfg["observable"] = {{"type", "trig"}, {"terms", {{1, 0.309, 0.951}}}};
  cfg["tolerances"] = {{"subaction_tol", 1e-12}};
  std::ostringstream out, err;
  CHECK(run_subcommand("subaction", cfg, dir.string(), out, err) == 2);
}

TEST_CASE("identical configs produce byte-identical outputs") {
  fs::path d1 = temp_dir("det1"), d2 = temp_dir("det2");
  Json cfg = base_config();
  cfg["sweep"] = {{"beta_schedule", {2.0, 4.0, 8.0}},
                  {"test_functions",
                   {{{"type", "dist_to_orbit"}, {"points", {0.0}}, {"exponent", 2}}}},
                  {"candidate_pmax", 2}};
  std::ostringstream o1, e1, o2, e2;
  CHECK(run_subcommand("sweep", cfg, d1.string(), o1, e1) == 0);
  CHECK(run_subcommand("sweep", cfg, d2.string(), o2, e2) == 0);
  CHECK(slurp(d1 / "result.json") == slurp(d2 / "result.json"));
  CHECK(slurp(d1 / "sweep.csv") == slurp(d2 / "sweep.csv"));
}

TEST_CASE("cli argument handling with --set overrides") {
  fs::path dir = temp_dir("cliargs");
  fs::path cfg_path = dir / "config.json";
  {
    std::ofstream f(cfg_path);
    f << base_config().dump(2);
  }
  std::ostringstream out, err;
  int rc = run_cli({"maxorbit", "--config", cfg_path.string(), "--set", "orbits.p_max=4",
                    "--out", (dir / "run").string()},
                   out, err);
  CHECK(rc == 0);
  Json result = Json::parse(slurp(dir / "run" / "result.json"));
  CHECK(result["best_orbit"]["period"].get<int>() == 1);
  CHECK(result["best_average"].get<double>() == doctest::Approx(1.0));

  std::ostringstream out2, err2;
  CHECK(run_cli({"maxorbit", "--config", (dir / "missing.json").string()}, out2, err2) == 1);
  std::ostringstream out3, err3;
  CHECK(run_cli({"maxorbit", "--bogus"}, out3, err3) == 1);
}

TEST_CASE("environment overrides: seed and sweep workers") {
  fs::path dir = temp_dir("env");
  Json cfg;
  cfg["system"] = {{"kind", "circle"}, {"m", 2}};
  cfg["entropy"] = {{"samples", 5000}, {"L_max", 6}, {"eps", 0.25}, {"w", 0.0}, {"k_max", 4}};
  cfg["seed"] = 1;
  std::ostringstream out, err;
  CHECK(run_subcommand("entropy", cfg, (dir / "a").string(), out, err) == 0);
  setenv("ERGOPT_SEED", "999", 1);
  CHECK(run_subcommand("entropy", cfg, (dir / "b").string(), out, err) == 0);
  unsetenv("ERGOPT_SEED");
  Json ra = Json::parse(slurp(dir / "a" / "result.json"));
  Json rb = Json::parse(slurp(dir / "b" / "result.json"));
  CHECK(ra["seed"].get<uint64_t>() == 1);
  CHECK(rb["seed"].get<uint64_t>() == 999);

  // thread count must not change sweep results
  Json scfg = base_config();
  scfg["grid"] = {{"resolution", 1 << 10}};
  scfg["sweep"] = {{"beta_schedule", {2.0, 4.0, 8.0, 16.0}}, {"candidate_pmax", 1}};
  std::ostringstream o1, e1, o2, e2;
  CHECK(run_subcommand("sweep", scfg, (dir / "t1").string(), o1, e1) == 0);
  setenv("ERGOPT_THREADS", "3", 1);
  CHECK(run_subcommand("sweep", scfg, (dir / "t3").string(), o2, e2) == 0);
  unsetenv("ERGOPT_THREADS");
  CHECK(slurp(dir / "t1" / "sweep.csv") == slurp(dir / "t3" / "sweep.csv"));
}

TEST_CASE("remaining subcommands run end to end") {
  fs::path dir = temp_dir("rest");
  std::ostringstream out, err;

  Json shadow_cfg;
  shadow_cfg["system"] = {{"kind", "circle"}, {"m", 2}};
  shadow_cfg["shadow"] = {{"points", {0.32, 0.66}}, {"periodic", true}};
  CHECK(run_subcommand("shadow", shadow_cfg, (dir / "shadow").string(), out, err) == 0);
  Json sres = Json::parse(slurp(dir / "shadow" / "result.json"));
  CHECK(sres["orbit"]["period"].get<int>() == 2);

  Json bq_cfg;
  bq_cfg["system"] = {{"kind", "circle"}, {"m", 2}};
  bq_cfg["bq"] = {{"n_max", 3}, {"K", {0.0}}};
  CHECK(run_subcommand("bq", bq_cfg, (dir / "bq").string(), out, err) == 0);

  Json ent_cfg;
  ent_cfg["system"] = {{"kind", "circle"}, {"m", 2}};
  ent_cfg["entropy"] = {{"samples", 20000}, {"L_max", 8}, {"eps", 0.25}, {"w", 0.0},
                        {"k_max", 6}};
  ent_cfg["seed"] = 7;
  CHECK(run_subcommand("entropy", ent_cfg, (dir / "entropy").string(), out, err) == 0);
  Json eres = Json::parse(slurp(dir / "entropy" / "result.json"));
  CHECK(std::fabs(eres["brin_katok_slope"].get<double>() - std::log(2.0)) < 0.15);

  Json morris_cfg = base_config();
  morris_cfg["morris"] = {{"beta_size", 0.5}, {"n", 2}, {"p_max", 6}, {"K", {0.0}}};
  CHECK(run_subcommand("morris", morris_cfg, (dir / "morris").string(), out, err) == 0);

  Json ret_cfg;
  ret_cfg["system"] = {{"kind", "circle"}, {"m", 3}};
  ret_cfg["returns"] = {{"Q", 2.0}, {"N0", 2}, {"N", 6}, {"horizon", 20000}, {"q", 0.41},
                        {"w", 0.41}};
  CHECK(run_subcommand("returns", ret_cfg, (dir / "returns").string(), out, err) == 0);

  Json alpha_cfg = base_config();
  alpha_cfg["grid"] = {{"resolution", 1 << 12}};
  alpha_cfg["alpha"] = {{"p_max", 8}, {"beta_lo", 128.0}, {"beta_hi", 512.0}};
  CHECK(run_subcommand("alpha", alpha_cfg, (dir / "alpha").string(), out, err) == 0);
  Json ares = Json::parse(slurp(dir / "alpha" / "result.json"));
  CHECK(ares["max_pairwise_difference"].get<double>() < 1e-2);
}
