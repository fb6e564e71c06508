#include "ergopt/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "ergopt/entropy.hpp"
#include "ergopt/laxcore.hpp"
#include "ergopt/perturb.hpp"
#include "ergopt/rng.hpp"
#include "ergopt/thermo.hpp"
#include "ergopt/version.hpp"

namespace ergopt {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Emitter {
  fs::path dir;
  std::string hash;

  void csv(const std::string& name, const std::string& header,
           const std::vector<std::string>& rows) const {
    std::ofstream out(dir / name, std::ios::binary);
    out << "# ergopt " << kVersion << " config=" << hash << "\n" << header << "\n";
    for (const auto& r : rows) out << r << "\n";
  }
  void json(const std::string& name, Json doc) const {
    doc["version"] = kVersion;
    doc["config_hash"] = hash;
    std::ofstream out(dir / name, std::ios::binary);
    out << doc.dump(2) << "\n";
  }
};

Json point_to_json(const Point& p) {
  if (p.is_circle()) return p.coord();
  return p.symbols();
}

Json orbit_to_json(const PeriodicOrbit& orbit) {
  Json j;
  j["period"] = orbit.period;
  j["verified"] = orbit.verified;
  j["points"] = Json::array();
  for (const auto& p : orbit.points) j["points"].push_back(point_to_json(p));
  return j;
}

Json pseudo_to_json(const PseudoOrbit& po) {
  Json j;
  j["delta"] = po.delta;
  j["gamma"] = po.gamma;
  j["jumps"] = po.jumps;
  j["periodic"] = po.periodic;
  j["points"] = Json::array();
  for (const auto& p : po.points) j["points"].push_back(point_to_json(p));
  return j;
}

int grid_size(const ExpandingSystem& sys, const Json& cfg, int fallback_circle = 1 << 14,
              int fallback_depth = 8) {
  Json grid = cfg.value("grid", Json::object());
  if (sys.is_circle()) return grid.value("resolution", fallback_circle);
  return grid.value("depth", fallback_depth);
}

uint64_t seed_of(const Json& cfg) {
  if (const char* env = std::getenv("ERGOPT_SEED")) return std::strtoull(env, nullptr, 10);
  return cfg.value("seed", 12345ULL);
}

int threads_of() {
  if (const char* env = std::getenv("ERGOPT_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

SolveOptions solve_options(const Json& cfg) {
  SolveOptions opts;
  opts.tol = cfg.value("tolerances", Json::object()).value("subaction_tol", -1.0);
  Json sub = cfg.value("subaction", Json::object());
  opts.max_iter = sub.value("max_iter", 60000L);
  opts.refine_p_max = sub.value("refine_pmax", 12);
  opts.cascade = sub.value("cascade", true);
  return opts;
}

std::vector<double> beta_schedule_of(const Json& section, double top) {
  if (section.contains("beta_schedule"))
    return section.at("beta_schedule").get<std::vector<double>>();
  std::vector<double> schedule;
  for (double b = 2.0; b <= top; b *= 2.0) schedule.push_back(b);
  return schedule;
}

int run_subaction(const ExpandingSystem& sys, const Json& cfg, const Emitter& emit,
                  std::ostream& out) {
  Observable f = make_observable(sys, cfg.at("observable"));
  SubActionSolution sol = solve_subaction(sys, f, grid_size(sys, cfg), solve_options(cfg));

  std::vector<std::string> rows;
  rows.reserve(sol.u.node_count());
  for (size_t i = 0; i < sol.u.node_count(); ++i) {
    Point p = sol.u.node_point(i);
    std::string coord = sys.is_circle() ? fmt(p.coord()) : Json(p.symbols()).dump();
    rows.push_back(coord + "," + fmt(sol.u[i]));
  }
  emit.csv("u.csv", "node,value", rows);

  Json header;
  header["system"] = cfg.at("system");
  header["resolution"] = sys.is_circle() ? sol.u.resolution : sol.u.depth;
  header["alpha"] = sol.alpha;
  header["alpha_refined"] = sol.alpha_refined;
  header["residual"] = sol.residual;
  emit.json("u.json", header);

  Json result;
  result["subcommand"] = "subaction";
  result["alpha"] = sol.alpha;
  result["alpha_refined"] = sol.alpha_refined;
  if (!std::isnan(sol.alpha_enum)) result["alpha_enum"] = sol.alpha_enum;
  result["residual"] = sol.residual;
  result["iterations"] = sol.iterations;
  result["converged"] = sol.converged;
  emit.json("result.json", result);

  out << "subaction: alpha " << fmt(sol.alpha_refined) << " residual " << fmt(sol.residual)
      << (sol.converged ? "" : " (NOT CONVERGED)") << "\n";
  if (!sol.converged) throw NotConverged("solve_subaction residual above tolerance");
  return 0;
}

int run_alpha(const ExpandingSystem& sys, const Json& cfg, const Emitter& emit,
              std::ostream& out) {
  Observable f = make_observable(sys, cfg.at("observable"));
  Json section = cfg.value("alpha", Json::object());
  SubActionSolution sol = solve_subaction(sys, f, grid_size(sys, cfg), solve_options(cfg));
  auto [orbit, best_avg] = best_periodic_orbit(sys, f, section.value("p_max", 12));
  double beta_lo = section.value("beta_lo", 512.0);
  double beta_hi = section.value("beta_hi", 2048.0);
  int res = grid_size(sys, cfg);
  GibbsState lo = equilibrium_state(sys, f, beta_lo, res);
  GibbsState hi = equilibrium_state(sys, f, beta_hi, res);
  double slope = (hi.pressure - lo.pressure) / (beta_hi - beta_lo);

  double e1 = -sol.alpha, e2 = best_avg, e3 = slope;
  double spread = std::max({std::fabs(e1 - e2), std::fabs(e1 - e3), std::fabs(e2 - e3)});

  Json result;
  result["subcommand"] = "alpha";
  result["minus_alpha_subaction"] = e1;
  result["minus_alpha_enumeration"] = e2;
  result["minus_alpha_pressure_slope"] = e3;
  result["max_pairwise_difference"] = spread;
  result["best_orbit"] = orbit_to_json(orbit);
  result["converged"] = sol.converged && lo.converged && hi.converged;
  emit.json("result.json", result);
  out << "alpha: estimates " << fmt(e1) << " " << fmt(e2) << " " << fmt(e3) << " spread "
      << fmt(spread) << "\n";
  if (!sol.converged) throw NotConverged("solve_subaction residual above tolerance");
  return 0;
}

int run_maxorbit(const ExpandingSystem& sys, const Json& cfg, const Emitter& emit,
                 std::ostream& out) {
  Observable f = make_observable(sys, cfg.at("observable"));
  int p_max = cfg.value("orbits", Json::object()).value("p_max", 8);
  OrbitRanking rank = rank_periodic_orbits(sys, f, p_max);
  Json result;
  result["subcommand"] = "maxorbit";
  result["best_orbit"] = orbit_to_json(rank.best);
  result["best_average"] = rank.best_average;
  if (rank.runner_up) {
    result["runner_up_orbit"] = orbit_to_json(*rank.runner_up);
    result["runner_up_average"] = rank.runner_up_average;
    result["gap"] = rank.best_average - rank.runner_up_average;
  }
  emit.json("result.json", result);
  out << "maxorbit: period " << rank.best.period << " average " << fmt(rank.best_average)
      << "\n";
  return 0;
}

int run_shadow(const ExpandingSystem& sys, const Json& cfg, const Emitter& emit,
               std::ostream& out) {
  Json section = cfg.at("shadow");
  std::vector<Point> points;
  for (const auto& v : section.at("points")) points.push_back(parse_point(sys, v));
  bool periodic = section.value("periodic", true);
  PseudoOrbit po = periodic ? close_segment(sys, points) : open_segment(sys, points);
  ShadowResult res = shadow(sys, po);
  Json result;
  result["subcommand"] = "shadow";
  result["pseudo_orbit"] = pseudo_to_json(po);
  result["eps_bound"] = res.eps_bound;
  result["sup_distance"] = res.sup_distance;
  result["point"] = point_to_json(res.point);
  if (res.orbit) result["orbit"] = orbit_to_json(*res.orbit);
  emit.json("result.json", result);
  out << "shadow: eps_bound " << fmt(res.eps_bound) << " observed " << fmt(res.sup_distance)
      << "\n";
  return 0;
}

int run_perturb(const ExpandingSystem& sys, const Json& cfg, const Emitter& emit,
                std::ostream& out) {
  Observable f = make_observable(sys, cfg.at("observable"));
  Json section = cfg.at("perturb");
  SubActionSolution sol = solve_subaction(sys, f, grid_size(sys, cfg), solve_options(cfg));
  if (!sol.converged) throw NotConverged("solve_subaction residual above tolerance");
  Observable fbar = reduced_function(sys, f, sol);

  int p_max = section.value("p_max", 8);
  OrbitRanking rank = rank_periodic_orbits(sys, fbar, p_max);
  const PeriodicOrbit& orbit = rank.best;

  double gamma_sep = sys.branch_radius();
  for (int i = 0; i < orbit.period; ++i)
    for (int j = i + 1; j < orbit.period; ++j)
      gamma_sep = std::min(gamma_sep, sys.metric(orbit.points[i], orbit.points[j]));

  double delta = section.value("delta", 1e-6);
  double gamma_delta = std::min(section.value("gamma_delta", 0.1), gamma_sep);
  double epsilon = section.value("epsilon", 0.1);
  int jump_budget = section.value("M", 2);
  PerturbationConstants constants = perturbation_constants(
      sys, fbar, jump_budget, delta, gamma_delta, epsilon, orbit.period);

  Json result;
  result["subcommand"] = "perturb";
  Json cj;
  cj["K"] = constants.K;
  cj["rho"] = constants.rho;
  cj["gamma2"] = constants.gamma2;
  cj["gamma3"] = constants.gamma3;
  cj["a"] = constants.a;
  cj["b"] = constants.b;
  cj["h_sup_cap"] = constants.h_sup_cap;
  cj["required_gamma_ratio"] = constants.required_gamma_ratio;
  cj["feasible"] = constants.feasible;
  cj["violated"] = constants.violated;
  result["constants"] = cj;
  result["orbit"] = orbit_to_json(orbit);

  if (!constants.feasible) {
    emit.json("result.json", result);
    std::string msg = "infeasible perturbation constants:";
    for (const auto& v : constants.violated) msg += " " + v + ";";
    out << "perturb: " << msg << "\n";
    throw InfeasibleConstants(msg);
  }

  std::optional<Observable> h;
  if (section.contains("h") && !section.at("h").is_null())
    h = make_observable(sys, section.at("h"));
  Observable g1 = build_locking_perturbation(sys, fbar, orbit, epsilon, h, constants);

  CertifyOptions copts;
  copts.p_max = p_max;
  copts.beta_schedule = beta_schedule_of(section, 4096.0);
  copts.grid_resolution = grid_size(sys, cfg);
  copts.mass_threshold = section.value("mass_threshold", 0.99);
  copts.n_preorbits = section.value("n_preorbits", 20);
  copts.preorbit_depth = section.value("preorbit_depth", 60);
  copts.subaction_tol = cfg.value("tolerances", Json::object()).value("subaction_tol", -1.0);
  copts.seed = seed_of(cfg);
  LockinReport report = certify_lockin(sys, g1, orbit, constants, copts);

  result["certified"] = report.certified;
  result["methods"] = Json::array();
  for (const auto& m : report.methods) {
    Json mj;
    mj["name"] = m.name;
    mj["ran"] = m.ran;
    mj["pass"] = m.pass;
    mj["margin"] = m.margin;
    mj["detail"] = m.detail;
    result["methods"].push_back(mj);
  }
  emit.json("result.json", result);
  out << "perturb: " << (report.certified ? "certified" : "not certified") << " on period-"
      << orbit.period << " orbit\n";
  return 0;
}

int run_gibbs(const ExpandingSystem& sys, const Json& cfg, const Emitter& emit,
              std::ostream& out) {
  Observable f = make_observable(sys, cfg.at("observable"));
  Json section = cfg.at("gibbs");
  double beta = section.at("beta").get<double>();
  if (!section.value("stabilized", true) && beta * f.sup_bound() > 700.0)
    throw OverflowGuard(
        "beta * sup|F| > 700 would overflow exp(); use the normalized stepping "
        "(gibbs.stabilized=true)");
  double tol = cfg.value("tolerances", Json::object()).value("gibbs_tol", 1e-12);
  GibbsState state = equilibrium_state(sys, f, beta, grid_size(sys, cfg), tol);

  std::vector<std::string> rows;
  rows.reserve(state.measure_weights.size());
  for (size_t i = 0; i < state.measure_weights.size(); ++i) {
    Point p = state.density.node_point(i);
    std::string coord = sys.is_circle() ? fmt(p.coord()) : Json(p.symbols()).dump();
    rows.push_back(coord + "," + fmt(state.measure_weights[i]) + "," +
                   fmt(state.density[i]) + "," + fmt(state.conjugate[i]));
  }
  emit.csv("weights.csv", "node,weight,density,conjugate", rows);

  Json result;
  result["subcommand"] = "gibbs";
  result["beta"] = beta;
  result["pressure"] = state.pressure;
  result["eigenvalue"] = state.eigenvalue;
  result["residual"] = state.residual;
  result["invariance_defect"] = state.invariance_defect;
  result["converged"] = state.converged;
  emit.json("result.json", result);
  out << "gibbs: pressure " << fmt(state.pressure) << " residual " << fmt(state.residual)
      << "\n";
  if (!state.converged) throw NotConverged("equilibrium_state residual above tolerance");
  return 0;
}

int run_sweep(const ExpandingSystem& sys, const Json& cfg, const Emitter& emit,
              std::ostream& out) {
  Observable f = make_observable(sys, cfg.at("observable"));
  Json section = cfg.value("sweep", Json::object());
  std::vector<double> schedule = beta_schedule_of(section, 1024.0);
  std::vector<Observable> tests;
  for (const auto& tf : section.value("test_functions", Json::array()))
    tests.push_back(make_observable(sys, tf));
  std::vector<PeriodicOrbit> candidates;
  int cp = section.value("candidate_pmax", 3);
  for (int p = 1; p <= cp; ++p)
    for (auto& orbit : enumerate_periodic(sys, p)) candidates.push_back(std::move(orbit));
  double radius = section.value("orbit_radius", 0.02);
  double tol = cfg.value("tolerances", Json::object()).value("gibbs_tol", 1e-12);
  SweepTable table = beta_sweep(sys, f, schedule, tests, candidates, radius,
                                grid_size(sys, cfg), tol, 20000, threads_of());

  std::string header = "beta,pressure,pressure_slope";
  for (size_t i = 0; i < tests.size(); ++i)
    header += ",integral_" + std::to_string(i) + ",diff_" + std::to_string(i);
  for (size_t j = 0; j < candidates.size(); ++j) header += ",orbit_mass_" + std::to_string(j);
  std::vector<std::string> rows;
  bool all_converged = true;
  for (const auto& row : table.rows) {
    std::string line = fmt(row.beta) + "," + fmt(row.pressure) + "," + fmt(row.pressure_slope);
    for (size_t i = 0; i < row.integrals.size(); ++i)
      line += "," + fmt(row.integrals[i]) + "," + fmt(row.integral_diffs[i]);
    for (double m : row.orbit_mass) line += "," + fmt(m);
    rows.push_back(line);
    all_converged = all_converged && row.converged;
  }
  emit.csv("sweep.csv", header, rows);

  Json result;
  result["subcommand"] = "sweep";
  result["rows"] = table.rows.size();
  result["final_pressure_slope"] = table.rows.empty() ? 0.0 : table.rows.back().pressure_slope;
  if (!table.rows.empty() && !table.rows.back().integral_diffs.empty())
    result["final_integral_diffs"] = table.rows.back().integral_diffs;
  if (!table.rows.empty() && !table.rows.back().orbit_mass.empty())
    result["final_orbit_mass"] = table.rows.back().orbit_mass;
  result["converged"] = all_converged;
  emit.json("result.json", result);
  out << "sweep: " << table.rows.size() << " rows, final slope "
      << fmt(result["final_pressure_slope"].get<double>()) << "\n";
  if (!all_converged) throw NotConverged("equilibrium_state residual above tolerance");
  return 0;
}

int run_entropy(const ExpandingSystem& sys, const Json& cfg, const Emitter& emit,
                std::ostream& out) {
  Json section = cfg.value("entropy", Json::object());
  long samples = section.value("samples", 100000L);
  int l_max = section.value("L_max", 12);
  double eps = section.value("eps", 0.25);
  int k_max = section.value("k_max", 10);
  Rng rng(seed_of(cfg));

  std::vector<Point> sample;
  sample.reserve(samples);
  if (sys.is_circle()) {
    for (long i = 0; i < samples; ++i) sample.push_back(Point::circle(rng.uniform()));
  } else {
    for (long i = 0; i < samples; ++i) {
      std::vector<int> w;
      w.push_back(static_cast<int>(rng.uniform_int(sys.symbol_count())));
      while (static_cast<int>(w.size()) < sys.truncation_depth()) {
        int nxt = static_cast<int>(rng.uniform_int(sys.symbol_count()));
        if (sys.transition_allowed(w.back(), nxt)) w.push_back(nxt);
      }
      sample.push_back(Point::word(std::move(w)));
    }
  }
  Point w = section.contains("w") ? parse_point(sys, section.at("w"))
                                  : (sys.is_circle() ? Point::circle(0.0)
                                                     : sample.front());
  std::vector<int> levels;
  for (int l = 1; l <= l_max; ++l) levels.push_back(l);
  BrinKatokEstimate bk = brin_katok_estimate(sys, sample, w, levels, eps);

  std::vector<int> ks;
  for (int k = 1; k <= k_max; ++k) ks.push_back(k);
  PartitionEntropy pe = empirical_partition_entropy(sys, sample, ks);

  std::vector<std::string> rows;
  for (size_t i = 0; i < bk.levels.size(); ++i)
    rows.push_back(std::to_string(bk.levels[i]) + "," + fmt(bk.fractions[i]) + "," +
                   fmt(bk.per_level[i]));
  emit.csv("brin_katok.csv", "L,fraction,minus_log_fraction_over_L", rows);
  rows.clear();
  for (size_t i = 0; i < pe.ks.size(); ++i)
    rows.push_back(std::to_string(pe.ks[i]) + "," + fmt(pe.per_k[i]));
  emit.csv("partition.csv", "k,entropy", rows);

  Json result;
  result["subcommand"] = "entropy";
  result["seed"] = seed_of(cfg);
  result["brin_katok_slope"] = bk.slope;
  result["truncated_at_zero_count"] = bk.truncated_at_zero_count;
  result["per_L"] = Json::array();
  for (size_t i = 0; i < bk.levels.size(); ++i)
    result["per_L"].push_back({{"L", bk.levels[i]},
                               {"fraction", bk.fractions[i]},
                               {"value", bk.per_level[i]}});
  result["partition_entropy_min"] = pe.min_value;
  result["per_k"] = Json::array();
  for (size_t i = 0; i < pe.ks.size(); ++i)
    result["per_k"].push_back({{"k", pe.ks[i]}, {"value", pe.per_k[i]}});
  emit.json("result.json", result);
  out << "entropy: Brin-Katok slope " << fmt(bk.slope) << " partition min "
      << fmt(pe.min_value) << "\n";
  return 0;
}

int run_bq(const ExpandingSystem& sys, const Json& cfg, const Emitter& emit,
           std::ostream& out) {
  Json section = cfg.at("bq");
  std::vector<Point> k_set;
  for (const auto& v : section.at("K")) k_set.push_back(parse_point(sys, v));
  auto table = bq_search(sys, k_set, section.value("n_max", 6));
  std::vector<std::string> rows;
  for (const auto& entry : table) {
    Json pts = Json::array();
    for (const auto& p : entry.orbit.points) pts.push_back(point_to_json(p));
    rows.push_back(std::to_string(entry.n) + "," + fmt(entry.value) + "," +
                   std::to_string(entry.orbit.period) + ",\"" + pts.dump() + "\"");
  }
  emit.csv("bq.csv", "n,value,period,orbit", rows);
  Json result;
  result["subcommand"] = "bq";
  result["final_value"] = table.back().value;
  result["final_orbit"] = orbit_to_json(table.back().orbit);
  emit.json("result.json", result);
  out << "bq: final value " << fmt(table.back().value) << "\n";
  return 0;
}

int run_morris(const ExpandingSystem& sys, const Json& cfg, const Emitter& emit,
               std::ostream& out) {
  Observable f = make_observable(sys, cfg.at("observable"));
  Json section = cfg.at("morris");
  std::vector<Point> k_set;
  for (const auto& v : section.at("K")) k_set.push_back(parse_point(sys, v));
  MorrisReport report = morris_step(sys, f, k_set, section.value("beta_size", 0.5),
                                    section.value("n", 2), section.value("p_max", 8));
  Json result;
  result["subcommand"] = "morris";
  result["target"] = orbit_to_json(report.target);
  result["maximizer_matches"] = report.maximizer_matches;
  result["gap_before"] = report.gap_before;
  result["gap_after"] = report.gap_after;
  emit.json("result.json", result);
  out << "morris: maximizer " << (report.maximizer_matches ? "matches" : "differs")
      << " gap " << fmt(report.gap_before) << " -> " << fmt(report.gap_after) << "\n";
  return 0;
}

int run_returns(const ExpandingSystem& sys, const Json& cfg, const Emitter& emit,
                std::ostream& out) {
  Json section = cfg.at("returns");
  Point q = parse_point(sys, section.at("q"));
  Point w = parse_point(sys, section.at("w"));
  ReturnStatistics stats = return_gap_diagnostic(
      sys, q, w, section.value("Q", 2.0), section.value("N0", 2), section.value("N", 6),
      section.value("horizon", 100000L));
  std::vector<std::string> rows;
  for (size_t i = 0; i < stats.times.size(); ++i)
    rows.push_back(std::to_string(i) + "," + std::to_string(stats.times[i]) + "," +
                   (i > 0 ? std::to_string(stats.gaps[i - 1]) : ""));
  emit.csv("returns.csv", "index,time,gap", rows);
  Json result;
  result["subcommand"] = "returns";
  result["radius"] = stats.radius;
  result["gap_bound"] = stats.gap_bound;
  result["return_count"] = stats.times.size();
  result["no_returns"] = stats.no_returns;
  result["fraction_meeting_bound"] = stats.fraction_meeting_bound;
  emit.json("result.json", result);
  out << "returns: " << stats.times.size() << " returns, bound " << fmt(stats.gap_bound)
      << " fraction " << fmt(stats.fraction_meeting_bound) << "\n";
  return 0;
}

}  // namespace

int run_subcommand(const std::string& name, Json config, const std::string& out_dir,
                   std::ostream& out, std::ostream& err) {
  try {
    validate_config(config, name);
    ExpandingSystem sys = make_system(config.at("system"));

    Emitter emit;
    emit.dir = out_dir.empty() ? fs::path(config.value("output_dir", "out")) : fs::path(out_dir);
    fs::create_directories(emit.dir);
    emit.hash = config_hash(config);
    emit.json("schema.json", config_schema(name));

    if (name == "subaction") return run_subaction(sys, config, emit, out);
    if (name == "alpha") return run_alpha(sys, config, emit, out);
    if (name == "maxorbit") return run_maxorbit(sys, config, emit, out);
    if (name == "shadow") return run_shadow(sys, config, emit, out);
    if (name == "perturb") return run_perturb(sys, config, emit, out);
    if (name == "gibbs") return run_gibbs(sys, config, emit, out);
    if (name == "sweep") return run_sweep(sys, config, emit, out);
    if (name == "entropy") return run_entropy(sys, config, emit, out);
    if (name == "bq") return run_bq(sys, config, emit, out);
    if (name == "morris") return run_morris(sys, config, emit, out);
    if (name == "returns") return run_returns(sys, config, emit, out);
    throw ValidationError("unknown subcommand: " + name);
  } catch (const InfeasibleConstants& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const NotConverged& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const OverflowGuard& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    err << "usage: ergopt <subcommand> --config FILE [--set k=v]... [--out DIR]\n";
    return 1;
  }
  std::string subcommand = args[0];
  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  for (size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[++i];
    } else if (args[i] == "--set" && i + 1 < args.size()) {
      overrides.push_back(args[++i]);
    } else if (args[i] == "--out" && i + 1 < args.size()) {
      out_dir = args[++i];
    } else {
      err << "error: unrecognized argument: " << args[i] << "\n";
      return 1;
    }
  }
  if (config_path.empty()) {
    err << "error: --config FILE is required\n";
    return 1;
  }
  try {
    Json config = load_config_file(config_path);
    for (const auto& assignment : overrides) apply_override(config, assignment);
    return run_subcommand(subcommand, std::move(config), out_dir, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ergopt
