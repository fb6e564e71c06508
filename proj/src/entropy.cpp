#include "ergopt/entropy.hpp"

#include <algorithm>
#include <cmath>

namespace ergopt {

namespace {

double xlogx(double x) { return x > 0.0 ? -x * std::log(x) : 0.0; }

double entropy_of_cells(const std::vector<double>& cell_mass) {
  double h = 0.0;
  for (double v : cell_mass) h += xlogx(v);
  return h;
}

// distribute mass over the level-k canonical partition cells
std::vector<double> cell_masses_circle(int m, int k, const std::vector<double>& coords,
                                       const std::vector<double>& mass) {
  long cells = 1;
  for (int i = 0; i < k; ++i) cells *= m;
  std::vector<double> out(cells, 0.0);
  for (size_t i = 0; i < coords.size(); ++i) {
    long c = static_cast<long>(std::floor(coords[i] * static_cast<double>(cells)));
    if (c >= cells) c = cells - 1;
    out[static_cast<size_t>(c)] += mass[i];
  }
  return out;
}

}  // namespace

JensenBound jensen_entropy_bound(const std::vector<double>& a) {
  JensenBound bound;
  double total = 0.0;
  for (double v : a) {
    if (v < 0.0) throw ValidationError("entries must be nonnegative");
    bound.lhs += xlogx(v);
    total += v;
  }
  bound.rhs = 1.0 + total * std::log(static_cast<double>(a.empty() ? 1 : a.size()));
  return bound;
}

DriftReport drift_lower_bound_check(const ExpandingSystem& sys, const Observable& f,
                                    const SubActionSolution& sol,
                                    const std::vector<Point>& k_set,
                                    const PeriodicOrbit& nu, double tol) {
  if (!sol.converged) throw NotConverged("sub-action iteration did not converge");
  if (k_set.empty()) throw ValidationError("the reference set K must be nonempty");

  DriftReport report;
  Observable u = Observable::grid_interpolant(sys, sol.u);
  Observable tilde = Observable::sum(
      {f, u, Observable::scale(-1.0, Observable::composed_with_map(sys, u, 1))});
  report.C = tilde.lipschitz_bound();
  // the certified (enumeration) alpha never overstates -alpha(f)
  report.alpha_used = std::isnan(sol.alpha_enum) ? sol.alpha_refined : sol.alpha_enum;

  Observable dist = Observable::dist_to_set(sys, k_set, 1);
  report.dist_integral = birkhoff_average(sys, dist, nu);
  report.rhs = birkhoff_average(sys, f, nu);
  report.lhs = -report.alpha_used - report.C * report.dist_integral;
  report.slack = report.rhs - report.lhs;
  report.holds = report.slack >= -tol;
  return report;
}

double dynamic_ball_fraction(const ExpandingSystem& sys, const std::vector<Point>& sample,
                             const Point& w, int big_l, double eps) {
  if (sample.empty()) throw ValidationError("empty sample");
  if (big_l < 0) throw ValidationError("L must be nonnegative");
  std::vector<Point> w_orbit;
  w_orbit.reserve(big_l + 1);
  Point wk = w;
  for (int k = 0; k <= big_l; ++k) {
    w_orbit.push_back(wk);
    if (k < big_l) wk = sys.forward(wk);
  }
  size_t inside = 0;
  for (const auto& x : sample) {
    Point xk = x;
    bool ok = true;
    for (int k = 0; k <= big_l; ++k) {
      if (!(sys.metric(xk, w_orbit[k]) < eps)) {
        ok = false;
        break;
      }
      if (k < big_l) xk = sys.forward(xk);
    }
    if (ok) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(sample.size());
}

BrinKatokEstimate brin_katok_estimate(const ExpandingSystem& sys,
                                      const std::vector<Point>& sample, const Point& w,
                                      const std::vector<int>& level_schedule, double eps) {
  if (level_schedule.empty()) throw ValidationError("empty level schedule");
  BrinKatokEstimate est;
  for (int big_l : level_schedule) {
    double frac = dynamic_ball_fraction(sys, sample, w, big_l, eps);
    if (frac == 0.0) {
      est.truncated_at_zero_count = true;
      break;
    }
    est.levels.push_back(big_l);
    est.fractions.push_back(frac);
    est.per_level.push_back(big_l > 0 ? -std::log(frac) / big_l : 0.0);
  }
  if (est.levels.empty()) return est;
  // least-squares slope of -log(fraction) against L
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(est.levels.size());
  for (size_t i = 0; i < est.levels.size(); ++i) {
    double x = est.levels[i];
    double y = -std::log(est.fractions[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  est.slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : est.per_level.back();
  return est;
}

MarkovPartitionLevel refine_partition(const ExpandingSystem& sys, int level, long budget) {
  if (level < 1) throw ValidationError("partition level must be >= 1");
  MarkovPartitionLevel part;
  part.level = level;
  if (sys.is_circle()) {
    const int m = sys.circle_m();
    long cells = 1;
    for (int i = 0; i < level; ++i) {
      cells *= m;
      if (cells > budget) throw BudgetExceeded("partition refinement budget exceeded");
    }
    part.cell_count = static_cast<size_t>(cells);
    part.cell_diameter = 1.0 / static_cast<double>(cells);
    return part;
  }
  GridFunction grid = make_grid(sys, level);
  part.cell_codes = grid.node_code;
  part.cell_count = part.cell_codes.size();
  part.cell_diameter = std::pow(sys.metric_base(), level);
  return part;
}

PartitionEntropy empirical_partition_entropy(const ExpandingSystem& sys,
                                             const GridFunction& grid,
                                             const std::vector<double>& weights,
                                             const std::vector<int>& k_schedule) {
  if (weights.size() != grid.node_count())
    throw ValidationError("weights must match the grid node count");
  double total = 0.0;
  for (double w : weights) total += w;
  if (std::fabs(total - 1.0) > 1e-8)
    throw ValidationError("weights must sum to 1");

  PartitionEntropy result;
  for (int k : k_schedule) {
    if (k < 1) throw ValidationError("partition level must be >= 1");
    std::vector<double> cells;
    if (sys.is_circle()) {
      std::vector<double> coords(grid.node_count());
      for (size_t i = 0; i < coords.size(); ++i)
        coords[i] = static_cast<double>(i) / grid.resolution;
      cells = cell_masses_circle(sys.circle_m(), k, coords, weights);
    } else {
      if (k > grid.depth)
        throw ValidationError("partition level exceeds the grid cylinder depth");
      long div = 1;
      for (int i = 0; i < grid.depth - k; ++i) div *= grid.symbols;
      long prefix_count = 1;
      for (int i = 0; i < k; ++i) prefix_count *= grid.symbols;
      cells.assign(static_cast<size_t>(prefix_count), 0.0);
      for (size_t i = 0; i < grid.node_count(); ++i)
        cells[static_cast<size_t>(grid.node_code[i] / div)] += weights[i];
    }
    result.ks.push_back(k);
    result.per_k.push_back(entropy_of_cells(cells) / k);
  }
  result.min_value = *std::min_element(result.per_k.begin(), result.per_k.end());
  return result;
}

PartitionEntropy empirical_partition_entropy(const ExpandingSystem& sys,
                                             const std::vector<Point>& sample,
                                             const std::vector<int>& k_schedule) {
  if (sample.empty()) throw ValidationError("empty sample");
  PartitionEntropy result;
  const double unit = 1.0 / static_cast<double>(sample.size());
  for (int k : k_schedule) {
    if (k < 1) throw ValidationError("partition level must be >= 1");
    std::vector<double> cells;
    if (sys.is_circle()) {
      std::vector<double> coords(sample.size());
      for (size_t i = 0; i < coords.size(); ++i) coords[i] = sample[i].coord();
      cells = cell_masses_circle(sys.circle_m(), k,
                                 coords, std::vector<double>(sample.size(), unit));
    } else {
      long prefix_count = 1;
      for (int i = 0; i < k; ++i) prefix_count *= sys.symbol_count();
      cells.assign(static_cast<size_t>(prefix_count), 0.0);
      for (const auto& p : sample) {
        const auto& w = p.symbols();
        if (static_cast<int>(w.size()) < k)
          throw TruncationError("sample word shorter than the partition level");
        long code = 0;
        for (int i = 0; i < k; ++i) code = code * sys.symbol_count() + w[i];
        cells[static_cast<size_t>(code)] += unit;
      }
    }
    result.ks.push_back(k);
    result.per_k.push_back(entropy_of_cells(cells) / k);
  }
  result.min_value = *std::min_element(result.per_k.begin(), result.per_k.end());
  return result;
}

std::vector<BqEntry> bq_search(const ExpandingSystem& sys, const std::vector<Point>& k_set,
                               int n_max, long budget) {
  if (k_set.empty()) throw ValidationError("the reference set K must be nonempty");
  if (n_max < 1) throw ValidationError("n_max must be >= 1");
  Observable dist = Observable::dist_to_set(sys, k_set, 1);
  std::vector<BqEntry> table;
  bool have = false;
  PeriodicOrbit best;
  double best_value = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    for (auto& orbit : enumerate_periodic(sys, n, budget)) {
      double value = birkhoff_average(sys, dist, orbit.points);
      if (!have || value < best_value) {
        best = std::move(orbit);
        best_value = value;
        have = true;
      }
    }
    BqEntry entry;
    entry.n = n;
    entry.orbit = best;
    entry.value = best_value;
    table.push_back(std::move(entry));
  }
  return table;
}

MorrisReport morris_step(const ExpandingSystem& sys, const Observable& f,
                         const std::vector<Point>& k_set, double beta_size, int n,
                         int p_max, long budget) {
  if (beta_size <= 0.0) throw ValidationError("beta_size must be positive");
  MorrisReport report;
  report.target = bq_search(sys, k_set, n, budget).back().orbit;
  report.perturbed = Observable::sum(
      {f, Observable::scale(-beta_size,
                            Observable::dist_to_set(sys, report.target.points, 1))});

  OrbitRanking before = rank_periodic_orbits(sys, f, p_max, budget);
  OrbitRanking after = rank_periodic_orbits(sys, report.perturbed, p_max, budget);
  report.gap_before =
      before.runner_up ? before.best_average - before.runner_up_average : 0.0;
  report.gap_after = after.runner_up ? after.best_average - after.runner_up_average : 0.0;
  report.maximizer_matches = same_orbit(sys, after.best, report.target, 1e-8);
  return report;
}

ReturnStatistics return_gap_diagnostic(const ExpandingSystem& sys, const Point& q,
                                       const Point& w, double Q, int N0, int N,
                                       long horizon) {
  if (!(Q > 1.0)) throw ValidationError("Q must exceed 1");
  if (N <= N0) throw ValidationError("N must exceed N0");
  if (horizon < 1) throw ValidationError("horizon must be >= 1");
  ReturnStatistics stats;
  stats.Q = Q;
  stats.N0 = N0;
  stats.N = N;
  stats.radius = 0.5 * std::pow(Q, -N);
  stats.gap_bound = std::pow(std::sqrt(2.0), N - N0 - 1);
  Point x = q;
  for (long t = 0; t < horizon; ++t) {
    if (sys.metric(x, w) <= stats.radius) stats.times.push_back(t);
    x = sys.forward(x);
  }
  stats.no_returns = stats.times.empty();
  long meeting = 0;
  for (size_t i = 1; i < stats.times.size(); ++i) {
    long gap = stats.times[i] - stats.times[i - 1];
    stats.gaps.push_back(gap);
    if (static_cast<double>(gap) >= stats.gap_bound) ++meeting;
  }
  if (!stats.gaps.empty())
    stats.fraction_meeting_bound =
        static_cast<double>(meeting) / static_cast<double>(stats.gaps.size());
  return stats;
}

}  // namespace ergopt
