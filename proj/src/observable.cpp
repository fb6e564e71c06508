#include "ergopt/observable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ergopt {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

struct Observable::Node {
  virtual ~Node() = default;
  virtual double eval(const ExpandingSystem& sys, const Point& x) const = 0;
  double lip = 0.0;
  double sup = 0.0;
};

namespace {

using Node = Observable::Node;

struct ConstantNode final : Node {
  double c;
  explicit ConstantNode(double v) : c(v) {
    lip = 0.0;
    sup = std::fabs(v);
  }
  double eval(const ExpandingSystem&, const Point&) const override { return c; }
};

struct TrigNode final : Node {
  std::vector<TrigTerm> terms;
  explicit TrigNode(std::vector<TrigTerm> t) : terms(std::move(t)) {
    for (const auto& tt : terms) {
      if (tt.k <= 0) throw ValidationError("trig frequency must be positive");
      lip += kTwoPi * tt.k * (std::fabs(tt.cos_coef) + std::fabs(tt.sin_coef));
      sup += std::fabs(tt.cos_coef) + std::fabs(tt.sin_coef);
    }
  }
  double eval(const ExpandingSystem& sys, const Point& x) const override {
    if (!sys.is_circle())
      throw ValidationError("trig observable requires a circle system");
    double v = 0.0;
    for (const auto& t : terms) {
      double arg = kTwoPi * t.k * x.coord();
      v += t.cos_coef * std::cos(arg) + t.sin_coef * std::sin(arg);
    }
    return v;
  }
};

struct PiecewiseNode final : Node {
  std::vector<double> breaks, vals;
  PiecewiseNode(std::vector<double> b, std::vector<double> v)
      : breaks(std::move(b)), vals(std::move(v)) {
    if (breaks.size() != vals.size() || breaks.empty())
      throw ValidationError("piecewise table needs matching nonempty breakpoints/values");
    for (size_t i = 0; i < breaks.size(); ++i) {
      if (breaks[i] < 0.0 || breaks[i] >= 1.0)
        throw ValidationError("breakpoints must lie in [0,1)");
      if (i > 0 && breaks[i] <= breaks[i - 1])
        throw ValidationError("breakpoints must be strictly ascending");
    }
    const size_t n = breaks.size();
    for (size_t i = 0; i < n; ++i) {
      double gap = (i + 1 < n) ? breaks[i + 1] - breaks[i]
                               : breaks[0] + 1.0 - breaks[n - 1];
      double rise = std::fabs(vals[(i + 1) % n] - vals[i]);
      if (gap > 0) lip = std::max(lip, rise / gap);
      sup = std::max(sup, std::fabs(vals[i]));
    }
  }
  double eval(const ExpandingSystem& sys, const Point& x) const override {
    if (!sys.is_circle())
      throw ValidationError("piecewise observable requires a circle system");
    double v = x.coord();
    const size_t n = breaks.size();
    // segment index: last breakpoint <= v, wrapping below breaks[0]
    size_t i = std::upper_bound(breaks.begin(), breaks.end(), v) - breaks.begin();
    i = (i == 0) ? n - 1 : i - 1;
    double x0 = breaks[i];
    double gap = (i + 1 < n) ? breaks[i + 1] - x0 : breaks[0] + 1.0 - x0;
    double t = v - x0;
    if (t < 0) t += 1.0;
    return vals[i] + (vals[(i + 1) % n] - vals[i]) * (gap > 0 ? t / gap : 0.0);
  }
};

struct CylinderNode final : Node {
  int depth;
  int symbols;
  std::vector<double> table;
  CylinderNode(const ExpandingSystem& sys, int r, std::vector<double> t)
      : depth(r), symbols(sys.symbol_count()), table(std::move(t)) {
    if (sys.is_circle())
      throw ValidationError("cylinder observable requires a shift system");
    long total = 1;
    for (int k = 0; k < depth; ++k) total *= symbols;
    if (static_cast<long>(table.size()) != total)
      throw ValidationError("cylinder table size must be symbols^depth");
    double lo = table[0], hi = table[0];
    for (double v : table) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sup = std::max(sup, std::fabs(v));
    }
    lip = (hi - lo) / std::pow(sys.metric_base(), depth);
  }
  double eval(const ExpandingSystem&, const Point& x) const override {
    const auto& w = x.symbols();
    if (static_cast<int>(w.size()) < depth)
      throw TruncationError("word shorter than the observable's cylinder depth");
    long code = 0;
    for (int k = 0; k < depth; ++k) code = code * symbols + w[k];
    return table[code];
  }
};

struct SumNode final : Node {
  std::vector<Observable> children;
  explicit SumNode(std::vector<Observable> c) : children(std::move(c)) {
    for (const auto& ch : children) {
      lip += ch.lipschitz_bound();
      sup += ch.sup_bound();
    }
  }
  double eval(const ExpandingSystem& sys, const Point& x) const override {
    double v = 0.0;
    for (const auto& ch : children) v += ch.evaluate(sys, x);
    return v;
  }
};

struct ScaleNode final : Node {
  double factor;
  Observable inner;
  ScaleNode(double a, Observable f) : factor(a), inner(std::move(f)) {
    lip = std::fabs(a) * inner.lipschitz_bound();
    sup = std::fabs(a) * inner.sup_bound();
  }
  double eval(const ExpandingSystem& sys, const Point& x) const override {
    return factor * inner.evaluate(sys, x);
  }
};

struct DistNode final : Node {
  std::vector<Point> set;
  int exponent;
  DistNode(const ExpandingSystem& sys, std::vector<Point> s, int e)
      : set(std::move(s)), exponent(e) {
    if (set.empty()) throw ValidationError("distance observable needs a nonempty set");
    if (exponent != 1 && exponent != 2)
      throw ValidationError("distance exponent must be 1 or 2");
    for (const auto& p : set) sys.validate(p);
    double diam = sys.diameter();
    lip = (exponent == 1) ? 1.0 : 2.0 * diam;
    sup = std::pow(diam, exponent);
  }
  double eval(const ExpandingSystem& sys, const Point& x) const override {
    double best = sys.metric(x, set[0]);
    for (size_t i = 1; i < set.size(); ++i) best = std::min(best, sys.metric(x, set[i]));
    return (exponent == 1) ? best : best * best;
  }
};

struct GridNode final : Node {
  GridFunction grid;
  GridNode(const ExpandingSystem& sys, GridFunction g) : grid(std::move(g)) {
    lip = grid.discrete_lip(sys);
    for (double v : grid.values) sup = std::max(sup, std::fabs(v));
  }
  double eval(const ExpandingSystem& sys, const Point& x) const override {
    return grid.value_at(sys, x);
  }
};

struct ComposeNode final : Node {
  Observable inner;
  int steps;
  ComposeNode(const ExpandingSystem& sys, Observable f, int n)
      : inner(std::move(f)), steps(n) {
    if (n < 0) throw ValidationError("composition step count must be >= 0");
    lip = inner.lipschitz_bound() * std::pow(sys.forward_lipschitz(), n);
    sup = inner.sup_bound();
  }
  double eval(const ExpandingSystem& sys, const Point& x) const override {
    return inner.evaluate(sys, sys.forward(x, steps));
  }
};

}  // namespace

Observable::Observable() : node_(std::make_shared<ConstantNode>(0.0)) {}

double Observable::evaluate(const ExpandingSystem& sys, const Point& x) const {
  return node_->eval(sys, x);
}
double Observable::lipschitz_bound() const { return node_->lip; }
double Observable::sup_bound() const { return node_->sup; }

Observable Observable::trig(std::vector<TrigTerm> terms) {
  return Observable(std::make_shared<TrigNode>(std::move(terms)));
}
Observable Observable::constant(double c) {
  return Observable(std::make_shared<ConstantNode>(c));
}
Observable Observable::piecewise_linear(std::vector<double> breakpoints,
                                        std::vector<double> values) {
  return Observable(std::make_shared<PiecewiseNode>(std::move(breakpoints), std::move(values)));
}
Observable Observable::cylinder(const ExpandingSystem& sys, int depth,
                                std::vector<double> table) {
  return Observable(std::make_shared<CylinderNode>(sys, depth, std::move(table)));
}
Observable Observable::sum(std::vector<Observable> children) {
  return Observable(std::make_shared<SumNode>(std::move(children)));
}
Observable Observable::scale(double factor, Observable inner) {
  return Observable(std::make_shared<ScaleNode>(factor, std::move(inner)));
}
Observable Observable::dist_to_set(const ExpandingSystem& sys, std::vector<Point> set,
                                   int exponent) {
  return Observable(std::make_shared<DistNode>(sys, std::move(set), exponent));
}
Observable Observable::grid_interpolant(const ExpandingSystem& sys, GridFunction values) {
  return Observable(std::make_shared<GridNode>(sys, std::move(values)));
}
Observable Observable::composed_with_map(const ExpandingSystem& sys, Observable inner,
                                         int steps) {
  return Observable(std::make_shared<ComposeNode>(sys, std::move(inner), steps));
}

double birkhoff_average(const ExpandingSystem& sys, const Observable& f,
                        const std::vector<Point>& cycle) {
  if (cycle.empty()) throw ValidationError("birkhoff average over an empty cycle");
  double s = 0.0;
  for (const auto& p : cycle) s += f.evaluate(sys, p);
  return s / static_cast<double>(cycle.size());
}

}  // namespace ergopt
