#pragma once

#include <memory>
#include <vector>

#include "ergopt/dynamics.hpp"
#include "ergopt/grid_function.hpp"

namespace ergopt {

struct TrigTerm {
  int k;
  double cos_coef;
  double sin_coef;
};

// A Lipschitz observable with exact evaluation and certified Lipschitz /
// sup-norm bounds. Composite nodes (sums, scalar multiples, distances to
// finite sets, grid interpolants, precompositions with the map) are
// first-class so that perturbed functions stay exactly evaluable; bounds
// compose as Lip(aF+bG) <= |a|Lip(F)+|b|Lip(G), Lip(d(.,S)) = 1.
// Observables are immutable values; evaluation is pure and reentrant.
class Observable {
 public:
  Observable();  // identically zero

  double evaluate(const ExpandingSystem& sys, const Point& x) const;
  double operator()(const ExpandingSystem& sys, const Point& x) const {
    return evaluate(sys, x);
  }
  double lipschitz_bound() const;
  double sup_bound() const;

  // sum_k a_k cos(2 pi k x) + b_k sin(2 pi k x), circle systems
  static Observable trig(std::vector<TrigTerm> terms);
  static Observable constant(double c);
  // piecewise-linear interpolation through (breakpoint, value) pairs on the
  // circle; breakpoints ascending in [0,1)
  static Observable piecewise_linear(std::vector<double> breakpoints,
                                     std::vector<double> values);
  // depth-r cylinder table for shift systems; `table` indexed by word code
  // (base-N, first symbol most significant); inadmissible slots ignored
  static Observable cylinder(const ExpandingSystem& sys, int depth,
                             std::vector<double> table);
  static Observable sum(std::vector<Observable> children);
  static Observable scale(double factor, Observable inner);
  // d(x, S)^exponent for a finite point set S (exponent 1 or 2)
  static Observable dist_to_set(const ExpandingSystem& sys, std::vector<Point> set,
                                int exponent = 1);
  // linear/cylinder interpolant of a grid function
  static Observable grid_interpolant(const ExpandingSystem& sys, GridFunction values);
  // x -> inner(T^n x)
  static Observable composed_with_map(const ExpandingSystem& sys, Observable inner,
                                      int steps = 1);

  struct Node;

 private:
  explicit Observable(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// (1/p) sum_i F(x_i) over an orbit cycle listing
double birkhoff_average(const ExpandingSystem& sys, const Observable& f,
                        const std::vector<Point>& cycle);

}  // namespace ergopt
