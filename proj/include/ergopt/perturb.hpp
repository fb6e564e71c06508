#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ergopt/laxcore.hpp"
#include "ergopt/observable.hpp"
#include "ergopt/orbits.hpp"

namespace ergopt {

// Feasibility constants for locking the maximizing measure onto a periodic
// orbit via G1 = Fbar - epsilon*d(., orbit) + h. Derived quantities:
//   K      = max{ M Lip(Fbar)/(1-lambda)^2, (Lip(Fbar)+2)/(1-lambda) }
//   rho    = 3 K delta / epsilon
//   gamma2 = gamma_delta - 2 delta/(1-lambda)
//   gamma3 = gamma2/Lip(T) - lambda rho
//   b      = -(2 K delta - epsilon rho)/2      (must be > 0)
//   a      = -(2 K delta + K rho - epsilon gamma3)/2   (must be > 0)
// Infeasible inputs are data, not errors: `feasible` is false and
// `violated` lists the failed conditions verbatim.
struct PerturbationConstants {
  int jump_budget = 0;  // M
  double delta = 0.0;
  double gamma_delta = 0.0;
  double epsilon = 0.0;
  int period = 0;  // p
  double lip_fbar = 0.0;
  double K = 0.0;
  double rho = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  double a = 0.0;
  double b = 0.0;
  double h_sup_cap = 0.0;           // K delta / (2p), admissible ||h||_0 radius
  double required_gamma_ratio = 0.0;  // gamma_delta/delta needed to satisfy the `a` condition
  bool feasible = false;
  std::vector<std::string> violated;
};

PerturbationConstants perturbation_constants(const ExpandingSystem& sys,
                                             const Observable& fbar, int jump_budget,
                                             double delta, double gamma_delta,
                                             double epsilon, int period);

// G1 = Fbar - epsilon*d(., orbit) + h with exact evaluation. Requires
// feasible constants; h (when present) must satisfy ||h||_0 < K delta/(2p)
// and Lip(h) <= 1 by its certificates.
Observable build_locking_perturbation(const ExpandingSystem& sys, const Observable& fbar,
                                      const PeriodicOrbit& orbit, double epsilon,
                                      const std::optional<Observable>& h,
                                      const PerturbationConstants& constants);

struct MethodResult {
  std::string name;
  bool ran = false;
  bool pass = false;
  double margin = 0.0;
  std::string detail;
};

struct LockinReport {
  PeriodicOrbit orbit;
  std::vector<MethodResult> methods;
  bool certified = false;
};

struct CertifyOptions {
  int p_max = 8;
  std::vector<double> beta_schedule;  // empty: powers of two up to 4096
  int grid_resolution = 1 << 14;
  double concentration_radius = 0.0;  // 0: use constants.rho
  double mass_threshold = 0.99;
  int n_preorbits = 20;
  int preorbit_depth = 60;
  double subaction_tol = -1.0;
  long subaction_max_iter = 60000;
  long enumeration_budget = 1L << 22;
  uint64_t seed = 2026;
};

// Three independent certifications that the maximizing measure of G1 sits
// on the orbit: enumeration gap, Gibbs concentration at large beta, and
// alpha-limits of calibrated pre-orbits for a freshly solved sub-action.
// Evidence with margins, not a proof.
LockinReport certify_lockin(const ExpandingSystem& sys, const Observable& g1,
                            const PeriodicOrbit& orbit,
                            const PerturbationConstants& constants,
                            const CertifyOptions& opts = {});

}  // namespace ergopt
