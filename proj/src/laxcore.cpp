#include "ergopt/laxcore.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "kernel.hpp"

namespace ergopt {

namespace {

using detail::Kernel;
using detail::build_kernel;

struct IterationResult {
  std::vector<double> u;
  double alpha = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  long iterations = 0;
  bool converged = false;
};

// Normalized value iteration u <- M(u) - max M(u) for the shiftless Bellman
// operator M(u) = max_y (F(y) + u(y)). The additive eigenvalue is bracketed
// by [min, max] of M(u)-u each sweep; the half-width of that bracket is the
// fixed-point residual at the midpoint alpha. When the raw residual
// plateaus, two fallbacks on the trailing window are tried: the arithmetic
// average of the iterates and the max-plus cycle average for the best
// detected period.
IterationResult iterate_bellman(const Kernel& kernel, std::vector<double> u, double tol,
                                long max_iter, int window) {
  const size_t n = kernel.n;
  IterationResult best;
  best.u = u;
  std::vector<double> mu(n);
  std::deque<std::pair<std::vector<double>, double>> ring;  // (iterate, shift)

  auto bracket = [&](const std::vector<double>& v, const std::vector<double>& mv) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (size_t j = 0; j < n; ++j) {
      double d = mv[j] - v[j];
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    return std::pair<double, double>{-(hi + lo) / 2.0, (hi - lo) / 2.0};
  };

  long last_improve = 0;
  const long plateau_span = 400;
  for (long iter = 1; iter <= max_iter; ++iter) {
    kernel.bellman(u, mu);
    auto [alpha, resid] = bracket(u, mu);
    if (resid < best.residual) {
      best.u = u;
      best.alpha = alpha;
      best.residual = resid;
      last_improve = iter;
    }
    best.iterations = iter;
    if (best.residual <= tol) {
      best.converged = true;
      return best;
    }

    double shift = *std::max_element(mu.begin(), mu.end());
    for (size_t j = 0; j < n; ++j) mu[j] -= shift;
    std::swap(u, mu);
    ring.emplace_back(u, shift);
    if (static_cast<int>(ring.size()) > window) ring.pop_front();

    if (iter - last_improve >= plateau_span && static_cast<int>(ring.size()) == window) {
      std::vector<std::vector<double>> candidates;

      std::vector<double> cesaro(n, 0.0);
      for (const auto& [v, s] : ring)
        for (size_t j = 0; j < n; ++j) cesaro[j] += v[j];
      for (size_t j = 0; j < n; ++j) cesaro[j] /= window;
      candidates.push_back(std::move(cesaro));

      // cycle detection: the window period c minimizing ||u_now - u_{now-c}||
      int c_best = 0;
      double err_best = std::numeric_limits<double>::infinity();
      for (int c = 1; c < window; ++c) {
        const auto& v = ring[window - 1 - c].first;
        double err = 0.0;
        for (size_t j = 0; j < n; ++j) err = std::max(err, std::fabs(u[j] - v[j]));
        if (err < err_best) {
          err_best = err;
          c_best = c;
        }
      }
      if (c_best >= 1) {
        double lambda_hat = 0.0;
        for (int i = 0; i < c_best; ++i) lambda_hat += ring[window - 1 - i].second;
        lambda_hat /= c_best;
        // v = max_j ( M^j(w) - j*Lambda ), assembled from the stored window
        std::vector<double> cyc(n, -std::numeric_limits<double>::infinity());
        double acc = 0.0;
        for (int jstep = 0; jstep < c_best; ++jstep) {
          const auto& [v, s] = ring[window - c_best + jstep];
          if (jstep > 0) acc += s - lambda_hat;
          for (size_t j = 0; j < n; ++j) cyc[j] = std::max(cyc[j], v[j] + acc);
        }
        candidates.push_back(std::move(cyc));
      }

      for (auto& cand : candidates) {
        double mx = *std::max_element(cand.begin(), cand.end());
        for (size_t j = 0; j < n; ++j) cand[j] -= mx;
        kernel.bellman(cand, mu);
        auto [alpha_c, resid_c] = bracket(cand, mu);
        if (resid_c < best.residual) {
          best.u = cand;
          best.alpha = alpha_c;
          best.residual = resid_c;
          last_improve = iter;
          u = std::move(cand);
        }
        if (best.residual <= tol) {
          best.converged = true;
          return best;
        }
      }
      if (iter - last_improve >= plateau_span) last_improve = iter - plateau_span / 2;
    }
  }
  best.converged = best.residual <= tol;
  return best;
}

std::vector<double> upsample_circle(const std::vector<double>& coarse, int fine_n) {
  const int cn = static_cast<int>(coarse.size());
  std::vector<double> fine(fine_n);
  for (int j = 0; j < fine_n; ++j) {
    double pos = static_cast<double>(j) * cn / fine_n;
    int i = static_cast<int>(std::floor(pos));
    double t = pos - i;
    fine[j] = (1.0 - t) * coarse[i % cn] + t * coarse[(i + 1) % cn];
  }
  return fine;
}

}  // namespace

std::vector<double> sample_on_grid(const ExpandingSystem& sys, const Observable& f,
                                   const GridFunction& grid) {
  std::vector<double> out(grid.node_count());
  for (size_t i = 0; i < out.size(); ++i) out[i] = f.evaluate(sys, grid.node_point(i));
  return out;
}

GridFunction apply_lax(const ExpandingSystem& sys, const Observable& f, double alpha,
                       const GridFunction& u) {
  Kernel kernel = build_kernel(sys, f, u);
  GridFunction out = u;
  kernel.bellman(u.values, out.values);
  for (double& v : out.values) v += alpha;
  return out;
}

double lax_residual(const ExpandingSystem& sys, const Observable& f, double alpha,
                    const GridFunction& u) {
  GridFunction lu = apply_lax(sys, f, alpha, u);
  double worst = 0.0;
  for (size_t j = 0; j < u.node_count(); ++j)
    worst = std::max(worst, std::fabs(lu[j] - u[j]));
  return worst;
}

SubActionSolution solve_subaction(const ExpandingSystem& sys, const Observable& f,
                                  int resolution, const SolveOptions& opts) {
  double tol = opts.tol;
  if (tol < 0) tol = sys.is_circle() ? 1e-6 : 1e-8;

  GridFunction grid = make_grid(sys, resolution);
  std::vector<double> init(grid.node_count(), 0.0);
  long spent = 0;

  if (sys.is_circle() && opts.cascade && resolution >= 8192) {
    std::vector<int> chain;
    for (int r = resolution / 4; r >= 2048; r /= 4) chain.push_back(r);
    std::reverse(chain.begin(), chain.end());
    std::vector<double> carry;
    for (int r : chain) {
      GridFunction sub = make_grid(sys, r);
      Kernel kernel = build_kernel(sys, f, sub);
      std::vector<double> start =
          carry.empty() ? std::vector<double>(sub.node_count(), 0.0)
                        : upsample_circle(carry, r);
      auto res = iterate_bellman(kernel, std::move(start), std::max(tol, 1e-7),
                                 opts.max_iter / 4, opts.window);
      spent += res.iterations;
      carry = std::move(res.u);
    }
    if (!carry.empty()) init = upsample_circle(carry, resolution);
  }

  Kernel kernel = build_kernel(sys, f, grid);
  IterationResult res =
      iterate_bellman(kernel, std::move(init), tol, opts.max_iter, opts.window);

  SubActionSolution sol;
  grid.values = std::move(res.u);
  sol.u = std::move(grid);
  sol.alpha = res.alpha;
  sol.residual = res.residual;
  sol.iterations = res.iterations + spent;
  sol.converged = res.converged;
  sol.alpha_refined = sol.alpha;

  if (opts.refine_p_max > 0) {
    int p_eff = opts.refine_p_max;
    if (!sys.is_circle()) {
      long total = 1;
      int p = 0;
      while (p < opts.refine_p_max && total <= opts.refine_budget / sys.symbol_count()) {
        total *= sys.symbol_count();
        ++p;
      }
      p_eff = p;
    }
    try {
      OrbitRanking rank = rank_periodic_orbits(sys, f, p_eff, opts.refine_budget);
      sol.alpha_enum = -rank.best_average;
      // periodic averages are certified lower bounds for -alpha(F)
      sol.alpha_refined = std::min(sol.alpha, sol.alpha_enum);
    } catch (const BudgetExceeded&) {
      // refinement skipped; the iteration estimate stands
    }
  }
  return sol;
}

SubActionSolution solve_subaction(const ExpandingSystem& sys, const Observable& f,
                                  int resolution, double tol, long max_iter) {
  SolveOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  return solve_subaction(sys, f, resolution, opts);
}

Observable reduced_function(const ExpandingSystem& sys, const Observable& f,
                            const SubActionSolution& sol) {
  if (!sol.converged)
    throw NotConverged("sub-action iteration did not converge; no reduced function");
  Observable u = Observable::grid_interpolant(sys, sol.u);
  return Observable::sum({f, Observable::constant(sol.alpha_refined), u,
                          Observable::scale(-1.0, Observable::composed_with_map(sys, u, 1))});
}

MatherSet mather_set(const ExpandingSystem& sys, const Observable& fbar,
                     const GridFunction& grid, double tol_mather) {
  if (tol_mather < 0) throw ValidationError("tol_mather must be nonnegative");
  MatherSet set;
  set.tol = tol_mather;
  for (size_t i = 0; i < grid.node_count(); ++i)
    if (fbar.evaluate(sys, grid.node_point(i)) >= -tol_mather)
      set.nodes.push_back(i);
  if (set.nodes.empty())
    throw ValidationError("empty Mather set: tol_mather is below the discretization error");
  return set;
}

Preorbit calibrated_preorbit(const ExpandingSystem& sys, const Observable& f,
                             const SubActionSolution& sol, const Point& z, int depth) {
  if (!sol.converged)
    throw NotConverged("sub-action iteration did not converge; no calibrated preorbit");
  if (depth < 1) throw ValidationError("preorbit depth must be >= 1");
  Preorbit out;
  out.points.reserve(depth + 1);
  out.points.push_back(z);
  Point current = z;
  for (int k = 1; k <= depth; ++k) {
    auto pres = sys.preimages(current);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& pre : pres) {
      double v = sol.alpha + f.evaluate(sys, pre.point) + sol.u.value_at(sys, pre.point);
      best = std::max(best, v);
    }
    int chosen = -1;
    int within = 0;
    for (size_t i = 0; i < pres.size(); ++i) {
      double v = sol.alpha + f.evaluate(sys, pres[i].point) +
                 sol.u.value_at(sys, pres[i].point);
      if (v >= best - 1e-9) {
        ++within;
        if (chosen < 0) chosen = static_cast<int>(i);  // lowest branch index
      }
    }
    if (within > 1) out.tie_steps.push_back(k);
    current = pres[static_cast<size_t>(chosen)].point;
    out.points.push_back(current);
  }
  return out;
}

}  // namespace ergopt
