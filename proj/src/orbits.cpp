#include "ergopt/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ergopt {

namespace {

constexpr double kOrbitTol = 1e-10;

bool point_less(const Point& a, const Point& b) {
  if (a.is_circle()) return a.coord() < b.coord();
  return a.symbols() < b.symbols();
}

void canonicalize(PeriodicOrbit& orbit) {
  size_t best = 0;
  for (size_t i = 1; i < orbit.points.size(); ++i)
    if (point_less(orbit.points[i], orbit.points[best])) best = i;
  std::rotate(orbit.points.begin(), orbit.points.begin() + best, orbit.points.end());
}

}  // namespace

PeriodicOrbit make_verified_orbit(const ExpandingSystem& sys, const Point& seed, int period) {
  if (period < 1) throw ValidationError("orbit period must be >= 1");
  PeriodicOrbit orbit;
  orbit.period = period;
  orbit.points.reserve(period);
  Point x = seed;
  for (int i = 0; i < period; ++i) {
    orbit.points.push_back(x);
    x = sys.forward(x);
  }
  if (sys.metric(x, seed) > kOrbitTol)
    throw ValidationError("orbit verification failed: does not close up");
  for (int i = 0; i < period; ++i)
    for (int j = i + 1; j < period; ++j)
      if (sys.metric(orbit.points[i], orbit.points[j]) <= kOrbitTol)
        throw ValidationError("orbit verification failed: period is not minimal");
  canonicalize(orbit);
  orbit.verified = true;
  return orbit;
}

std::vector<PeriodicOrbit> enumerate_periodic(const ExpandingSystem& sys, int period,
                                              long budget) {
  if (period < 1) throw ValidationError("period must be >= 1");
  std::vector<PeriodicOrbit> out;

  if (sys.is_circle()) {
    const long m = sys.circle_m();
    long mod = 1;
    for (int i = 0; i < period; ++i) {
      mod *= m;
      if (mod > budget) throw BudgetExceeded("periodic enumeration budget exceeded");
    }
    mod -= 1;  // fixed points of T^p are k/(m^p - 1)
    std::vector<char> visited(static_cast<size_t>(mod), 0);
    std::vector<long> cycle;
    for (long k = 0; k < mod; ++k) {
      if (visited[k]) continue;
      cycle.clear();
      long j = k;
      do {
        visited[j] = 1;
        cycle.push_back(j);
        j = (j * m) % mod;
      } while (j != k);
      if (static_cast<int>(cycle.size()) != period) continue;
      PeriodicOrbit orbit;
      orbit.period = period;
      for (long c : cycle)
        orbit.points.push_back(Point::circle(static_cast<double>(c) / mod));
      canonicalize(orbit);
      orbit.verified = true;
      out.push_back(std::move(orbit));
    }
    return out;
  }

  const int n = sys.symbol_count();
  long total = 1;
  for (int i = 0; i < period; ++i) {
    total *= n;
    if (total > budget) throw BudgetExceeded("periodic enumeration budget exceeded");
  }
  long head_div = total / n;
  std::vector<char> visited(static_cast<size_t>(total), 0);
  std::vector<int> word(period);
  std::vector<long> cycle;
  for (long code = 0; code < total; ++code) {
    if (visited[code]) continue;
    cycle.clear();
    long c = code;
    do {
      visited[c] = 1;
      cycle.push_back(c);
      c = (c % head_div) * n + c / head_div;  // rotate word left
    } while (c != code);
    if (static_cast<int>(cycle.size()) != period) continue;
    long canon = *std::min_element(cycle.begin(), cycle.end());
    long w = canon;
    for (int i = period - 1; i >= 0; --i) {
      word[i] = static_cast<int>(w % n);
      w /= n;
    }
    bool admissible = true;
    for (int i = 0; i < period && admissible; ++i)
      admissible = sys.transition_allowed(word[i], word[(i + 1) % period]);
    if (!admissible) continue;
    PeriodicOrbit orbit;
    orbit.period = period;
    const int depth = sys.truncation_depth();
    for (int r = 0; r < period; ++r) {
      std::vector<int> pt(depth);
      for (int i = 0; i < depth; ++i) pt[i] = word[(r + i) % period];
      orbit.points.push_back(Point::word(std::move(pt)));
    }
    orbit.verified = true;
    out.push_back(std::move(orbit));
  }
  return out;
}

OrbitRanking rank_periodic_orbits(const ExpandingSystem& sys, const Observable& f,
                                  int p_max, long budget) {
  OrbitRanking rank;
  bool have_best = false, have_runner = false;
  for (int p = 1; p <= p_max; ++p) {
    for (auto& orbit : enumerate_periodic(sys, p, budget)) {
      double avg = birkhoff_average(sys, f, orbit.points);
      if (!have_best || avg > rank.best_average) {
        if (have_best) {
          rank.runner_up = std::move(rank.best);
          rank.runner_up_average = rank.best_average;
          have_runner = true;
        }
        rank.best = std::move(orbit);
        rank.best_average = avg;
        have_best = true;
      } else if (!have_runner || avg > rank.runner_up_average) {
        rank.runner_up = std::move(orbit);
        rank.runner_up_average = avg;
        have_runner = true;
      }
    }
  }
  if (!have_best) throw ValidationError("no periodic orbit within the requested periods");
  return rank;
}

std::pair<PeriodicOrbit, double> best_periodic_orbit(const ExpandingSystem& sys,
                                                     const Observable& f, int p_max,
                                                     long budget) {
  OrbitRanking rank = rank_periodic_orbits(sys, f, p_max, budget);
  return {rank.best, rank.best_average};
}

namespace {

PseudoOrbit build_pseudo(const ExpandingSystem& sys, const std::vector<Point>& segment,
                         bool periodic) {
  if (segment.empty()) throw ValidationError("pseudo-orbit segment must be nonempty");
  for (const auto& p : segment) sys.validate(p);
  PseudoOrbit po;
  po.points = segment;
  po.periodic = periodic;
  const size_t n = segment.size();
  const double jump_tol = sys.is_circle() ? 1e-12 : 0.0;
  const size_t gaps = periodic ? n : (n > 0 ? n - 1 : 0);
  for (size_t k = 0; k < gaps; ++k) {
    double gap = sys.metric(sys.forward(segment[k]), segment[(k + 1) % n]);
    po.delta = std::max(po.delta, gap);
    if (gap > jump_tol) po.jumps.push_back(static_cast<int>(k));
  }
  if (n == 1) {
    po.gamma = sys.branch_radius();  // no pair exists
  } else {
    po.gamma = sys.diameter();
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        po.gamma = std::min(po.gamma, sys.metric(segment[i], segment[j]));
  }
  return po;
}

}  // namespace

PseudoOrbit close_segment(const ExpandingSystem& sys, const std::vector<Point>& segment) {
  return build_pseudo(sys, segment, true);
}

PseudoOrbit open_segment(const ExpandingSystem& sys, const std::vector<Point>& segment) {
  return build_pseudo(sys, segment, false);
}

ShadowResult shadow(const ExpandingSystem& sys, const PseudoOrbit& po, int precision_cap) {
  const double lambda = sys.contraction();
  const double e0 = sys.branch_radius();
  if (!(po.delta < (1.0 - lambda) * e0))
    throw ValidationError("shadowing hypothesis violated: delta >= (1-lambda)*e0");
  const int n = static_cast<int>(po.points.size());
  const double a = lambda * po.delta / (1.0 - lambda);

  // Pull back along the inverse branches that send T(x_k) to x_k. Each
  // intermediate value is T^k of the final point up to the nested-ball
  // diameter 2a*lambda^j, so collecting them during the backward pass gives
  // the whole orbit window without expansive forward error growth.
  int steps;
  if (po.periodic) {
    int shrink = 1;
    if (a > 0.0)
      shrink = static_cast<int>(std::ceil(std::log(1e-13 / (2.0 * a)) / std::log(lambda)));
    if (!sys.is_circle()) shrink = std::max(shrink, sys.truncation_depth() + 1);
    steps = n + std::max(shrink, 1);
    steps = std::min(steps, std::max(precision_cap, n + 1));
  } else {
    steps = n - 1;
  }

  std::vector<Point> window(n);
  Point w = po.points[steps % n];
  if (steps == n - 1 && !po.periodic) window[n - 1] = w;
  for (int k = steps - 1; k >= 0; --k) {
    w = sys.pull_back(w, po.points[k % n]);
    if (k < n) window[k] = w;
  }

  ShadowResult result;
  result.point = window[0];
  result.eps_bound = po.delta / (1.0 - lambda);
  for (int k = 0; k < n; ++k)
    result.sup_distance = std::max(result.sup_distance, sys.metric(window[k], po.points[k]));

  if (po.periodic) {
    // minimal period of the shadowing orbit
    int minimal = n;
    for (int q = 1; q < n; ++q) {
      if (n % q != 0) continue;
      double worst = 0.0;
      for (int i = 0; i < n; ++i)
        worst = std::max(worst, sys.metric(window[i], window[(i + q) % n]));
      if (worst <= 1e-11) {
        minimal = q;
        break;
      }
    }
    PeriodicOrbit orbit;
    orbit.period = minimal;
    orbit.points.assign(window.begin(), window.begin() + minimal);
    for (int i = 0; i < minimal; ++i) {
      double gap = sys.metric(sys.forward(orbit.points[i]), window[(i + 1) % n]);
      if (gap > 1e-9) throw NotConverged("shadowing orbit failed the periodicity check");
    }
    for (int i = 0; i < minimal; ++i)
      for (int j = i + 1; j < minimal; ++j)
        if (sys.metric(orbit.points[i], orbit.points[j]) <= 1e-12)
          throw NotConverged("shadowing orbit has coinciding points");
    canonicalize(orbit);
    orbit.verified = true;
    result.orbit = std::move(orbit);
  }
  return result;
}

AlphaLimitReport alpha_limit_check(const ExpandingSystem& sys,
                                   const std::vector<Point>& preorbit,
                                   const PeriodicOrbit& orbit, double bound) {
  if (preorbit.size() < 2) throw ValidationError("preorbit needs at least two points");
  if (!orbit.verified) throw ValidationError("orbit fails periodicity verification");
  AlphaLimitReport report;

  report.backward_orbit_ok = true;
  for (size_t k = preorbit.size() - 1; k >= 1; --k) {
    double gap = sys.metric(sys.forward(preorbit[k]), preorbit[k - 1]);
    if (gap > kOrbitTol) {
      report.backward_orbit_ok = false;
      break;
    }
  }
  if (!report.backward_orbit_ok)
    throw ValidationError("preorbit fails backward-orbit verification");

  const int p = orbit.period;
  const int deepest = static_cast<int>(preorbit.size()) - 1;
  // align the phase at the deepest point, then track it forward
  int phase_deep = 0;
  double best = sys.metric(preorbit[deepest], orbit.points[0]);
  for (int j = 1; j < p; ++j) {
    double d = sys.metric(preorbit[deepest], orbit.points[j]);
    if (d < best) {
      best = d;
      phase_deep = j;
    }
  }
  report.distances.resize(preorbit.size());
  for (int k = 0; k <= deepest; ++k) {
    int phase = (phase_deep + (deepest - k)) % p;
    report.distances[k] = sys.metric(preorbit[k], orbit.points[phase]);
  }

  // maximal suffix (in depth k) on which the shadowing hypothesis holds
  int from = -1;
  for (int k = deepest; k >= 0; --k) {
    if (report.distances[k] < bound)
      from = k;
    else
      break;
  }
  report.hypothesis_from = from;
  if (from < 0 || from > deepest - 1) {
    report.pass = false;
    return report;
  }
  for (int k = from; k < deepest; ++k) {
    if (report.distances[k] > 1e-12 && report.distances[k + 1] > 1e-13)
      report.worst_ratio =
          std::max(report.worst_ratio, report.distances[k + 1] / report.distances[k]);
  }
  const double lambda = sys.contraction();
  double expected_tail =
      std::max(bound * std::pow(lambda, deepest - from) * 4.0, 1e-10);
  report.pass = report.distances[deepest] <= expected_tail;
  return report;
}

bool same_orbit(const ExpandingSystem& sys, const PeriodicOrbit& a, const PeriodicOrbit& b,
                double tol) {
  if (a.period != b.period) return false;
  for (int i = 0; i < a.period; ++i)
    if (sys.metric(a.points[i], b.points[i]) > tol) return false;
  return true;
}

double birkhoff_average(const ExpandingSystem& sys, const Observable& f,
                        const PeriodicOrbit& orbit) {
  if (!orbit.verified) throw ValidationError("orbit fails periodicity verification");
  return birkhoff_average(sys, f, orbit.points);
}

}  // namespace ergopt
