#pragma once

#include <cstddef>
#include <vector>

#include "ergopt/dynamics.hpp"

namespace ergopt {

// Numerical carrier for a real function on a grid: equispaced nodes j/G on
// the circle, or all admissible depth-r cylinders on a shift. Off-node
// circle values are read by linear interpolation; shift values are exact
// cylinder lookups.
struct GridFunction {
  SpaceKind kind = SpaceKind::Circle;
  int resolution = 0;  // circle node count G
  int depth = 0;       // shift cylinder depth r
  int symbols = 0;
  std::vector<long> node_code;   // shift: admissible word codes, ascending
  std::vector<long> slot_of;     // shift: code -> slot, -1 if inadmissible
  std::vector<double> values;    // one per node

  size_t node_count() const { return values.size(); }
  double& operator[](size_t i) { return values[i]; }
  double operator[](size_t i) const { return values[i]; }

  Point node_point(size_t i) const;
  long slot_of_point(const Point& x) const;  // shift only
  double value_at(const ExpandingSystem& sys, const Point& x) const;
  double max_value() const;
  double min_value() const;
  // max slope between adjacent circle nodes, or the exact word-metric
  // Lipschitz constant of the cylinder table
  double discrete_lip(const ExpandingSystem& sys) const;

  std::vector<int> decode_word(long code) const;
  long encode_word(const std::vector<int>& w) const;
};

// Build a zero-filled grid: `size` = node count G (circle, must be >= 2) or
// cylinder depth r (shift).
GridFunction make_grid(const ExpandingSystem& sys, int size, double fill = 0.0);

}  // namespace ergopt
