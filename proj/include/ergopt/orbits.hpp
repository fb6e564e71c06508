#pragma once

#include <optional>
#include <vector>

#include "ergopt/dynamics.hpp"
#include "ergopt/observable.hpp"

namespace ergopt {

// A verified periodic orbit, listed in forward order with the numerically /
// lexicographically smallest point first. `period` is the minimal period.
struct PeriodicOrbit {
  std::vector<Point> points;
  int period = 0;
  bool verified = false;
};

// A finite point sequence with jump bookkeeping. When `periodic`, indices
// are cyclic and delta includes the closing gap d(T(x_{p-1}), x_0).
struct PseudoOrbit {
  std::vector<Point> points;
  double delta = 0.0;              // max_k d(T(x_k), x_{k+1})
  std::vector<int> jumps;          // indices with positive gap
  double gamma = 0.0;              // min pairwise distance (e0 for singletons)
  bool periodic = true;
};

struct ShadowResult {
  Point point;                      // the shadowing point y
  double eps_bound = 0.0;           // delta / (1 - lambda)
  double sup_distance = 0.0;        // observed sup_k d(T^k y, x_k)
  std::optional<PeriodicOrbit> orbit;  // present for periodic inputs
};

struct AlphaLimitReport {
  bool backward_orbit_ok = false;
  bool pass = false;
  int hypothesis_from = -1;   // first depth at which distances fall below the bound
  double worst_ratio = 0.0;   // worst one-step decay ratio on the checked tail
  std::vector<double> distances;  // d(z_{-k}, aligned orbit point), k = 0..depth
};

// All orbits of minimal period exactly p, each verified. Circle-m maps
// enumerate the cycles of k -> m*k mod (m^p - 1); shifts enumerate
// admissible words up to rotation.
std::vector<PeriodicOrbit> enumerate_periodic(const ExpandingSystem& sys, int period,
                                              long budget = (1L << 24));

struct OrbitRanking {
  PeriodicOrbit best;
  double best_average = 0.0;
  std::optional<PeriodicOrbit> runner_up;
  double runner_up_average = 0.0;
};

// Maximizer of the Birkhoff average over all minimal periods <= p_max, with
// the best competing orbit. Ties break toward smaller period, then the
// lexicographically smaller point list.
OrbitRanking rank_periodic_orbits(const ExpandingSystem& sys, const Observable& f,
                                  int p_max, long budget = (1L << 24));
std::pair<PeriodicOrbit, double> best_periodic_orbit(const ExpandingSystem& sys,
                                                     const Observable& f, int p_max,
                                                     long budget = (1L << 24));

// Close a finite segment into a cyclic pseudo-orbit, recomputing delta,
// jumps and gamma from the points.
PseudoOrbit close_segment(const ExpandingSystem& sys, const std::vector<Point>& segment);
// Same bookkeeping for an open (non-repeating) segment: no closing gap.
PseudoOrbit open_segment(const ExpandingSystem& sys, const std::vector<Point>& segment);

// Constructive shadowing: requires po.delta < (1-lambda)*e0. Periodic
// pseudo-orbits yield a verified periodic orbit of the same period.
// `precision_cap` bounds the number of pull-back steps.
ShadowResult shadow(const ExpandingSystem& sys, const PseudoOrbit& po,
                    int precision_cap = 200);

// Check that a backward orbit (preorbit[k] = z_{-k}, T(z_{-k}) = z_{-k+1})
// is asymptotic to the given orbit: distances eventually below `bound` and
// geometrically decaying along the tail.
AlphaLimitReport alpha_limit_check(const ExpandingSystem& sys,
                                   const std::vector<Point>& preorbit,
                                   const PeriodicOrbit& orbit, double bound);

// Build and verify the orbit of `seed` under the claim that it has the
// given period; returns canonical form. Throws if verification fails.
PeriodicOrbit make_verified_orbit(const ExpandingSystem& sys, const Point& seed, int period);

bool same_orbit(const ExpandingSystem& sys, const PeriodicOrbit& a, const PeriodicOrbit& b,
                double tol = 1e-9);

// Birkhoff average with the periodicity check required of callers.
double birkhoff_average(const ExpandingSystem& sys, const Observable& f,
                        const PeriodicOrbit& orbit);

}  // namespace ergopt
