#include "ergopt/perturb.hpp"

#include <algorithm>
#include <cmath>

#include "ergopt/rng.hpp"
#include "ergopt/thermo.hpp"

namespace ergopt {

PerturbationConstants perturbation_constants(const ExpandingSystem& sys,
                                             const Observable& fbar, int jump_budget,
                                             double delta, double gamma_delta,
                                             double epsilon, int period) {
  if (jump_budget < 1 || delta <= 0.0 || gamma_delta <= 0.0 || epsilon <= 0.0 || period < 1)
    throw ValidationError("perturbation constants need positive inputs");

  PerturbationConstants c;
  c.jump_budget = jump_budget;
  c.delta = delta;
  c.gamma_delta = gamma_delta;
  c.epsilon = epsilon;
  c.period = period;
  c.lip_fbar = fbar.lipschitz_bound();

  const double lambda = sys.contraction();
  const double e0 = sys.branch_radius();
  const double lip_t = sys.forward_lipschitz();
  const double one_ml = 1.0 - lambda;

  c.K = std::max(jump_budget * c.lip_fbar / (one_ml * one_ml), (c.lip_fbar + 2.0) / one_ml);
  c.rho = 3.0 * c.K * delta / epsilon;
  c.gamma2 = gamma_delta - 2.0 * delta / one_ml;
  c.gamma3 = c.gamma2 / lip_t - lambda * c.rho;
  c.b = -(2.0 * c.K * delta - epsilon * c.rho) / 2.0;
  c.a = -(2.0 * c.K * delta + c.K * c.rho - epsilon * c.gamma3) / 2.0;
  c.h_sup_cap = c.K * delta / (2.0 * period);
  // gamma_delta/delta threshold that makes the `a` condition hold, solving
  // epsilon*gamma3 > 2K delta + K rho for gamma_delta
  c.required_gamma_ratio =
      lip_t * (2.0 * c.K + 3.0 * c.K * c.K / epsilon + 3.0 * lambda * c.K) / epsilon +
      2.0 / one_ml;

  const double cap = one_ml * e0;
  if (!(delta < cap)) c.violated.push_back("delta exceeds (1-lambda)e0");
  if (!(c.rho > 0.0)) c.violated.push_back("rho nonpositive");
  if (!(c.rho < cap)) c.violated.push_back("rho exceeds (1-lambda)e0");
  if (!(c.gamma3 > 0.0)) c.violated.push_back("gamma3 nonpositive");
  if (!(c.gamma3 < cap)) c.violated.push_back("gamma3 exceeds (1-lambda)e0");
  if (!(c.b > 0.0)) c.violated.push_back("2K delta - epsilon rho must be negative");
  if (!(c.a > 0.0)) c.violated.push_back("2K delta + K rho - epsilon gamma3 must be negative");
  c.feasible = c.violated.empty();
  return c;
}

Observable build_locking_perturbation(const ExpandingSystem& sys, const Observable& fbar,
                                      const PeriodicOrbit& orbit, double epsilon,
                                      const std::optional<Observable>& h,
                                      const PerturbationConstants& constants) {
  if (!constants.feasible) {
    std::string msg = "infeasible perturbation constants:";
    for (const auto& v : constants.violated) msg += " " + v + ";";
    throw InfeasibleConstants(msg);
  }
  if (!orbit.verified) throw ValidationError("orbit fails periodicity verification");
  if (epsilon < 0.0) throw ValidationError("epsilon must be nonnegative");
  std::vector<Observable> parts;
  parts.push_back(fbar);
  if (epsilon > 0.0)
    parts.push_back(
        Observable::scale(-epsilon, Observable::dist_to_set(sys, orbit.points, 1)));
  if (h) {
    if (!(h->sup_bound() < constants.h_sup_cap))
      throw InfeasibleConstants("h violates ||h||_0 < K delta/(2p)");
    if (!(h->lipschitz_bound() <= 1.0))
      throw InfeasibleConstants("h violates Lip(h) <= 1");
    parts.push_back(*h);
  }
  return parts.size() == 1 ? parts[0] : Observable::sum(std::move(parts));
}

LockinReport certify_lockin(const ExpandingSystem& sys, const Observable& g1,
                            const PeriodicOrbit& orbit,
                            const PerturbationConstants& constants,
                            const CertifyOptions& opts) {
  if (!orbit.verified) throw ValidationError("orbit fails periodicity verification");
  LockinReport report;
  report.orbit = orbit;

  // 1. enumeration gap
  {
    MethodResult m;
    m.name = "enumeration_gap";
    try {
      OrbitRanking rank = rank_periodic_orbits(sys, g1, opts.p_max, opts.enumeration_budget);
      m.ran = true;
      bool matches = same_orbit(sys, rank.best, orbit, 1e-8);
      double gap = rank.runner_up ? rank.best_average - rank.runner_up_average : 0.0;
      m.pass = matches && (!rank.runner_up || gap > 0.0);
      m.margin = gap;
      m.detail = matches ? "best enumerated orbit matches" : "best enumerated orbit differs";
    } catch (const BudgetExceeded& e) {
      m.ran = false;
      m.detail = e.what();
    }
    report.methods.push_back(std::move(m));
  }

  // 2. Gibbs concentration at the largest beta
  {
    MethodResult m;
    m.name = "gibbs_concentration";
    std::vector<double> schedule = opts.beta_schedule;
    if (schedule.empty())
      for (double beta = 2.0; beta <= 4096.0; beta *= 2.0) schedule.push_back(beta);
    double radius =
        opts.concentration_radius > 0.0 ? opts.concentration_radius : constants.rho;
    try {
      GibbsState state =
          equilibrium_state(sys, g1, schedule.back(), opts.grid_resolution, 1e-12, 20000);
      double mass = mass_within(sys, state, orbit.points, radius);
      m.ran = true;
      m.pass = state.converged && mass >= opts.mass_threshold;
      m.margin = mass - opts.mass_threshold;
      m.detail = "mass " + std::to_string(mass) + " within radius " + std::to_string(radius);
    } catch (const std::runtime_error& e) {
      m.ran = false;
      m.detail = e.what();
    }
    report.methods.push_back(std::move(m));
  }

  // 3. alpha-limits of calibrated pre-orbits for a fresh sub-action of G1
  {
    MethodResult m;
    m.name = "preorbit_alpha_limit";
    try {
      SolveOptions sopts;
      sopts.tol = opts.subaction_tol;
      sopts.max_iter = opts.subaction_max_iter;
      sopts.refine_p_max = opts.p_max;
      int resolution = sys.is_circle() ? opts.grid_resolution
                                       : std::min(8, sys.truncation_depth() - 1);
      SubActionSolution sol = solve_subaction(sys, g1, resolution, sopts);
      if (!sol.converged) {
        m.ran = false;
        m.detail = "sub-action iteration for G1 did not converge";
      } else {
        m.ran = true;
        Rng rng(opts.seed);
        const double bound = (1.0 - sys.contraction()) * sys.branch_radius();
        int passed = 0;
        double worst_ratio = 0.0;
        for (int t = 0; t < opts.n_preorbits; ++t) {
          Point z;
          if (sys.is_circle()) {
            z = Point::circle(rng.uniform());
          } else {
            // random admissible word
            std::vector<int> w;
            int sym = static_cast<int>(rng.uniform_int(sys.symbol_count()));
            w.push_back(sym);
            while (static_cast<int>(w.size()) < sys.truncation_depth()) {
              int nxt = static_cast<int>(rng.uniform_int(sys.symbol_count()));
              if (!sys.transition_allowed(w.back(), nxt)) continue;
              w.push_back(nxt);
            }
            z = Point::word(std::move(w));
          }
          Preorbit pre = calibrated_preorbit(sys, g1, sol, z, opts.preorbit_depth);
          AlphaLimitReport alr = alpha_limit_check(sys, pre.points, orbit, bound);
          if (alr.pass) ++passed;
          worst_ratio = std::max(worst_ratio, alr.worst_ratio);
        }
        m.pass = passed == opts.n_preorbits;
        m.margin = static_cast<double>(passed) / opts.n_preorbits;
        m.detail = std::to_string(passed) + "/" + std::to_string(opts.n_preorbits) +
                   " preorbits pass, worst decay ratio " + std::to_string(worst_ratio);
      }
    } catch (const std::runtime_error& e) {
      m.ran = false;
      m.detail = e.what();
    }
    report.methods.push_back(std::move(m));
  }

  report.certified = true;
  for (const auto& m : report.methods) report.certified = report.certified && m.ran && m.pass;
  return report;
}

}  // namespace ergopt
