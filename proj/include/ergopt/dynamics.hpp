#pragma once

#include <variant>
#include <vector>

#include "ergopt/errors.hpp"

namespace ergopt {

enum class SpaceKind { Circle, Shift };

// A point of the phase space: either a circle coordinate in [0,1) or a
// finite symbol word standing for the cylinder it spans (its canonical
// representative).
class Point {
 public:
  Point() : rep_(0.0) {}

  static Point circle(double x) {
    Point p;
    p.rep_ = x;
    return p;
  }
  static Point word(std::vector<int> symbols) {
    Point p;
    p.rep_ = std::move(symbols);
    return p;
  }

  bool is_circle() const { return std::holds_alternative<double>(rep_); }

  double coord() const {
    if (!is_circle()) throw ValidationError("point is not a circle coordinate");
    return std::get<double>(rep_);
  }
  const std::vector<int>& symbols() const {
    if (is_circle()) throw ValidationError("point is not a symbol word");
    return std::get<std::vector<int>>(rep_);
  }

 private:
  std::variant<double, std::vector<int>> rep_;
};

struct BranchPreimage {
  Point point;
  int branch;
};

// reduce to [0,1)
double wrap_unit(double x);
// circle metric min(|x-y|, 1-|x-y|)
double circle_distance(double x, double y);

// An expanding map together with its expansion data and inverse-branch
// access. Three concrete kinds: x -> m*x mod 1 on the circle, the full
// one-sided shift on N symbols, and subshifts of finite type over a 0/1
// transition matrix. Immutable after construction.
class ExpandingSystem {
 public:
  static ExpandingSystem circle_map(int m);
  static ExpandingSystem full_shift(int symbols, double metric_base = 0.5, int depth = 40);
  static ExpandingSystem subshift(std::vector<std::vector<int>> transitions,
                                  double metric_base = 0.5, int depth = 40);

  SpaceKind kind() const { return kind_; }
  bool is_circle() const { return kind_ == SpaceKind::Circle; }
  int branch_bound() const { return d_; }           // d: max number of inverse branches
  double contraction() const { return lambda_; }    // lambda: branch contraction ratio
  double branch_radius() const { return e0_; }      // e0: ball radius where branches live
  double forward_lipschitz() const { return lip_t_; }
  double diameter() const { return diameter_; }
  int circle_m() const;
  int symbol_count() const { return symbols_; }
  int truncation_depth() const { return depth_; }
  double metric_base() const { return metric_base_; }
  bool has_matrix() const { return !matrix_.empty(); }
  const std::vector<std::vector<int>>& transition_matrix() const { return matrix_; }
  bool transition_allowed(int from, int to) const;

  // throws ValidationError on out-of-range coordinates / inadmissible words
  void validate(const Point& x) const;

  Point forward(const Point& x, long steps = 1) const;
  std::vector<BranchPreimage> preimages(const Point& x) const;
  double metric(const Point& x, const Point& y) const;

  // The inverse branch S with S(T(through)) == through, applied to z.
  // z must lie within branch_radius() of T(through).
  Point pull_back(const Point& z, const Point& through) const;

 private:
  ExpandingSystem() = default;

  SpaceKind kind_ = SpaceKind::Circle;
  int d_ = 2;
  double lambda_ = 0.5;
  double e0_ = 0.125;
  double lip_t_ = 2.0;
  double diameter_ = 0.5;
  int m_ = 2;                              // circle only
  int symbols_ = 0;                        // shift only
  int depth_ = 0;                          // shift truncation depth
  double metric_base_ = 0.5;               // shift metric base
  std::vector<std::vector<int>> matrix_;   // SFT only; empty = full shift
};

}  // namespace ergopt
