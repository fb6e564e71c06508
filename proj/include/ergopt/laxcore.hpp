#pragma once

#include <limits>
#include <vector>

#include "ergopt/grid_function.hpp"
#include "ergopt/observable.hpp"
#include "ergopt/orbits.hpp"

namespace ergopt {

// Result of the additive-eigenvector iteration for the Lax operator
//   L(u)(x) = max_{y in T^-1 x} { alpha + F(y) + u(y) }.
// `alpha` is the grid system's additive eigenvalue estimate; `residual` is
// the sup-norm defect of u as a fixed point of L at that alpha and is
// recomputable from (u, alpha). `alpha_refined` folds in the enumerated
// periodic-orbit lower bound for -alpha(F) and is the headline estimate.
struct SubActionSolution {
  GridFunction u;
  double alpha = 0.0;
  double alpha_refined = 0.0;
  double alpha_enum = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::infinity();
  long iterations = 0;
  bool converged = false;
};

struct SolveOptions {
  double tol = -1.0;      // <0 picks the default: 1e-6 circle grids, 1e-8 shifts
  long max_iter = 60000;
  int refine_p_max = 12;  // 0 disables the periodic-orbit refinement
  long refine_budget = 1L << 22;
  bool cascade = true;    // coarse-to-fine warm start on large circle grids
  int window = 64;        // trailing window for the plateau fallbacks
};

// One application of the Lax operator on the grid carrying u (preimage
// u-values interpolated on circle grids, exact cylinder lookups on shifts).
GridFunction apply_lax(const ExpandingSystem& sys, const Observable& f, double alpha,
                       const GridFunction& u);

// sup-norm of L(u) - u at the given alpha
double lax_residual(const ExpandingSystem& sys, const Observable& f, double alpha,
                    const GridFunction& u);

// Max-plus power iteration with sup-normalization for a calibrated
// sub-action. Non-convergence is reported in the result, never silently
// accepted.
SubActionSolution solve_subaction(const ExpandingSystem& sys, const Observable& f,
                                  int resolution, const SolveOptions& opts = {});
SubActionSolution solve_subaction(const ExpandingSystem& sys, const Observable& f,
                                  int resolution, double tol, long max_iter);

// F + alpha + u - u(T(.)) as an exactly evaluable composite. Requires a
// converged solution.
Observable reduced_function(const ExpandingSystem& sys, const Observable& f,
                            const SubActionSolution& sol);

struct MatherSet {
  std::vector<size_t> nodes;  // grid nodes with fbar >= -tol
  double tol = 0.0;
};

MatherSet mather_set(const ExpandingSystem& sys, const Observable& fbar,
                     const GridFunction& grid, double tol_mather);

struct Preorbit {
  std::vector<Point> points;    // points[k] = z_{-k}, so T(points[k]) = points[k-1]
  std::vector<int> tie_steps;   // steps where the maximizing preimage was ambiguous
};

// Backward orbit choosing at each step the preimage maximizing
// alpha + F(y) + u(y); ties within 1e-9 resolve to the lowest branch index
// and are flagged.
Preorbit calibrated_preorbit(const ExpandingSystem& sys, const Observable& f,
                             const SubActionSolution& sol, const Point& z, int depth);

// convenience: evaluate an observable at every grid node
std::vector<double> sample_on_grid(const ExpandingSystem& sys, const Observable& f,
                                   const GridFunction& grid);

}  // namespace ergopt
