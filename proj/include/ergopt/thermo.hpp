#pragma once

#include <vector>

#include "ergopt/grid_function.hpp"
#include "ergopt/observable.hpp"
#include "ergopt/orbits.hpp"

namespace ergopt {

// Finite-rank surrogate of the equilibrium state at inverse temperature
// beta: right/left eigenvectors of the transfer operator
//   (L h)(x) = sum_{y in T^-1 x} exp(beta F(y)) h(y)
// and node weights proportional to density * conjugate. `residual` is the
// relative sup-norm eigen defect; `invariance_defect` measures how far the
// pushforward of the weights under T is from the weights themselves.
struct GibbsState {
  double beta = 0.0;
  double pressure = 0.0;    // log eigenvalue (computed in stabilized units)
  double eigenvalue = 0.0;  // exp(pressure); may overflow to inf at large beta
  double residual = 0.0;
  double invariance_defect = 0.0;
  GridFunction density;
  GridFunction conjugate;
  std::vector<double> measure_weights;
  long iterations = 0;
  bool converged = false;
};

// Raw operator application. Guarded: beta * sup|F| > 700 would overflow
// exp(), so that case throws OverflowGuard advising the stabilized path.
GridFunction transfer_apply(const ExpandingSystem& sys, const Observable& f, double beta,
                            const GridFunction& h);

// Power iteration on the sup-normalized operator (weights exp(beta(F-max F)),
// log-norm accumulation), so arbitrarily large beta stays finite.
GibbsState equilibrium_state(const ExpandingSystem& sys, const Observable& f, double beta,
                             int resolution, double tol = 1e-12, long max_iter = 20000);

double integrate(const ExpandingSystem& sys, const GibbsState& state, const Observable& f);
double mass_within(const ExpandingSystem& sys, const GibbsState& state,
                   const std::vector<Point>& set, double radius);

struct SweepRow {
  double beta = 0.0;
  double pressure = 0.0;
  double pressure_slope = 0.0;          // vs previous row
  std::vector<double> integrals;        // one per test function
  std::vector<double> integral_diffs;   // |integral - previous integral|
  std::vector<double> orbit_mass;       // mass within radius of each candidate orbit
  bool converged = true;
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

// Zero-temperature diagnostic sweep: pressure, test-function integrals,
// candidate-orbit concentration and Cauchy differences along an increasing
// beta schedule.
SweepTable beta_sweep(const ExpandingSystem& sys, const Observable& f,
                      const std::vector<double>& schedule,
                      const std::vector<Observable>& test_functions,
                      const std::vector<PeriodicOrbit>& candidates, double orbit_radius,
                      int resolution, double tol = 1e-12, long max_iter = 20000,
                      int threads = 1);

}  // namespace ergopt
