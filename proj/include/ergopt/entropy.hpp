#pragma once

#include <vector>

#include "ergopt/laxcore.hpp"
#include "ergopt/observable.hpp"
#include "ergopt/orbits.hpp"

namespace ergopt {

struct JensenBound {
  double lhs = 0.0;  // sum of -a_i log a_i
  double rhs = 0.0;  // 1 + (sum a_i) log n
};

// Concavity bound for entropy-like sums; asserts lhs <= rhs.
JensenBound jensen_entropy_bound(const std::vector<double>& a);

struct DriftReport {
  double lhs = 0.0;   // -alpha(f) - C * integral of d(x,K)
  double rhs = 0.0;   // integral of f
  double slack = 0.0;  // rhs - lhs
  double C = 0.0;      // Lipschitz certificate of f + u - u(T(.))
  double alpha_used = 0.0;
  double dist_integral = 0.0;
  bool holds = false;
};

// Lower bound on orbit averages in terms of the distance to the maximizing
// support: -alpha(f) - C*int d(x,K) dnu <= int f dnu. Uses the certified
// (enumeration) alpha when available so the asserted side never overshoots.
DriftReport drift_lower_bound_check(const ExpandingSystem& sys, const Observable& f,
                                    const SubActionSolution& sol,
                                    const std::vector<Point>& k_set,
                                    const PeriodicOrbit& nu, double tol = 1e-9);

// Fraction of the sample inside the dynamic ball V(w, L, eps):
// d(T^k x, T^k w) < eps for all k = 0..L.
double dynamic_ball_fraction(const ExpandingSystem& sys, const std::vector<Point>& sample,
                             const Point& w, int big_l, double eps);

struct BrinKatokEstimate {
  double slope = 0.0;  // least-squares slope of -log(fraction) against L
  std::vector<int> levels;
  std::vector<double> fractions;
  std::vector<double> per_level;  // -log(fraction)/L
  bool truncated_at_zero_count = false;  // some level had no hits; slope is a lower bound
};

BrinKatokEstimate brin_katok_estimate(const ExpandingSystem& sys,
                                      const std::vector<Point>& sample, const Point& w,
                                      const std::vector<int>& level_schedule, double eps);

struct MarkovPartitionLevel {
  int level = 0;
  size_t cell_count = 0;
  double cell_diameter = 0.0;  // exact m^-n on circle-m, base^n on shifts
  // circle: cell j is [j*diam, (j+1)*diam); shift: depth-n cylinders by code
  std::vector<long> cell_codes;  // shift only: admissible codes
};

MarkovPartitionLevel refine_partition(const ExpandingSystem& sys, int level,
                                      long budget = (1L << 24));

struct PartitionEntropy {
  std::vector<int> ks;
  std::vector<double> per_k;  // (1/k) sum -nu(A) log nu(A) over the level-k cells
  double min_value = 0.0;
};

// From grid weights.
PartitionEntropy empirical_partition_entropy(const ExpandingSystem& sys,
                                             const GridFunction& grid,
                                             const std::vector<double>& weights,
                                             const std::vector<int>& k_schedule);
// From a point sample (empirical measure).
PartitionEntropy empirical_partition_entropy(const ExpandingSystem& sys,
                                             const std::vector<Point>& sample,
                                             const std::vector<int>& k_schedule);

struct BqEntry {
  int n = 0;
  PeriodicOrbit orbit;
  double value = 0.0;  // min over periods <= n of the mean distance to K
};

// Exhaustive search for low-period orbits close to a compact set: per n, the
// periodic orbit of period <= n minimizing int d(x,K) dmu. Values are
// nonincreasing in n and hit zero exactly when an enumerated orbit lies in K.
std::vector<BqEntry> bq_search(const ExpandingSystem& sys, const std::vector<Point>& k_set,
                               int n_max, long budget = (1L << 22));

struct MorrisReport {
  Observable perturbed;      // f - beta_size * d(., L_n)
  PeriodicOrbit target;       // L_n, the bq_search minimizer at level n
  bool maximizer_matches = false;
  double gap_before = 0.0;    // best-vs-runner-up gap of f
  double gap_after = 0.0;     // same gap for the perturbed function
};

MorrisReport morris_step(const ExpandingSystem& sys, const Observable& f,
                         const std::vector<Point>& k_set, double beta_size, int n,
                         int p_max, long budget = (1L << 22));

struct ReturnStatistics {
  double Q = 0.0;
  int N0 = 0;
  int N = 0;
  double radius = 0.0;     // Q^-N / 2
  double gap_bound = 0.0;  // sqrt(2)^(N - N0 - 1)
  std::vector<long> times;
  std::vector<long> gaps;
  double fraction_meeting_bound = 1.0;
  bool no_returns = false;
};

// Diagnostic only: return times of the forward orbit of q into the
// radius-Q^-N/2 ball about w, with the gap bound reported but not asserted.
ReturnStatistics return_gap_diagnostic(const ExpandingSystem& sys, const Point& q,
                                       const Point& w, double Q, int N0, int N,
                                       long horizon);

}  // namespace ergopt
