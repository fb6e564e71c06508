#include "ergopt/dynamics.hpp"

#include <cmath>
#include <queue>
#include <string>

namespace ergopt {

double wrap_unit(double x) {
  double y = x - std::floor(x);
  if (y >= 1.0) y -= 1.0;  // guards against floor rounding at the seam
  if (y < 0.0) y += 1.0;
  return y;
}

double circle_distance(double x, double y) {
  double d = std::fabs(x - y);
  return std::min(d, 1.0 - d);
}

namespace {

// signed difference a-b wrapped to [-1/2, 1/2)
double wrap_signed(double t) {
  double y = t - std::round(t);
  if (y >= 0.5) y -= 1.0;
  if (y < -0.5) y += 1.0;
  return y;
}

bool strongly_connected(const std::vector<std::vector<int>>& m) {
  const int n = static_cast<int>(m.size());
  auto reach = [&](bool transpose) {
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w = 0; w < n; ++w) {
        int edge = transpose ? m[w][v] : m[v][w];
        if (edge && !seen[w]) {
          seen[w] = 1;
          q.push(w);
        }
      }
    }
    for (char s : seen)
      if (!s) return false;
    return true;
  };
  return reach(false) && reach(true);
}

}  // namespace

ExpandingSystem ExpandingSystem::circle_map(int m) {
  if (m < 2) throw ValidationError("circle map needs m >= 2");
  ExpandingSystem sys;
  sys.kind_ = SpaceKind::Circle;
  sys.m_ = m;
  sys.d_ = m;
  sys.lambda_ = 1.0 / m;
  // strictly inside the 1/(2m) branch-injectivity radius; leaves slack for
  // the shadowing constants
  sys.e0_ = 1.0 / (4.0 * m);
  sys.lip_t_ = static_cast<double>(m);
  sys.diameter_ = 0.5;
  return sys;
}

ExpandingSystem ExpandingSystem::full_shift(int symbols, double metric_base, int depth) {
  if (symbols < 2) throw ValidationError("full shift needs at least 2 symbols");
  if (!(metric_base > 0.0 && metric_base < 1.0))
    throw ValidationError("shift metric base must lie in (0,1)");
  if (depth < 2) throw ValidationError("shift truncation depth must be >= 2");
  ExpandingSystem sys;
  sys.kind_ = SpaceKind::Shift;
  sys.symbols_ = symbols;
  sys.d_ = symbols;
  sys.lambda_ = metric_base;
  sys.metric_base_ = metric_base;
  sys.e0_ = metric_base;  // balls of this radius pin the first coordinate
  sys.lip_t_ = 1.0 / metric_base;
  sys.diameter_ = 1.0;
  sys.depth_ = depth;
  return sys;
}

ExpandingSystem ExpandingSystem::subshift(std::vector<std::vector<int>> transitions,
                                          double metric_base, int depth) {
  const int n = static_cast<int>(transitions.size());
  if (n < 2) throw ValidationError("transition matrix must be at least 2x2");
  for (const auto& row : transitions) {
    if (static_cast<int>(row.size()) != n)
      throw ValidationError("transition matrix must be square");
    for (int v : row)
      if (v != 0 && v != 1) throw ValidationError("transition matrix entries must be 0/1");
  }
  if (!strongly_connected(transitions))
    throw ValidationError("transition matrix must be irreducible");
  ExpandingSystem sys = full_shift(n, metric_base, depth);
  int d = 0;
  for (int j = 0; j < n; ++j) {
    int col = 0;
    for (int i = 0; i < n; ++i) col += transitions[i][j];
    d = std::max(d, col);
  }
  if (d == 0) throw ValidationError("transition matrix has an unreachable symbol");
  sys.d_ = d;
  sys.matrix_ = std::move(transitions);
  return sys;
}

int ExpandingSystem::circle_m() const {
  if (kind_ != SpaceKind::Circle) throw ValidationError("not a circle system");
  return m_;
}

bool ExpandingSystem::transition_allowed(int from, int to) const {
  if (matrix_.empty()) return true;
  return matrix_[from][to] != 0;
}

void ExpandingSystem::validate(const Point& x) const {
  if (kind_ == SpaceKind::Circle) {
    if (!x.is_circle()) throw ValidationError("expected a circle coordinate");
    double v = x.coord();
    if (!(v >= 0.0 && v < 1.0)) throw ValidationError("circle coordinate outside [0,1)");
    return;
  }
  if (x.is_circle()) throw ValidationError("expected a symbol word");
  const auto& w = x.symbols();
  if (w.empty()) throw ValidationError("empty symbol word");
  if (static_cast<int>(w.size()) > depth_)
    throw ValidationError("word longer than the truncation depth");
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0 || w[i] >= symbols_) throw ValidationError("symbol out of range");
    if (i + 1 < w.size() && !transition_allowed(w[i], w[i + 1]))
      throw ValidationError("word inadmissible under the transition matrix");
  }
}

Point ExpandingSystem::forward(const Point& x, long steps) const {
  if (steps < 0) throw ValidationError("forward requires a nonnegative step count");
  validate(x);
  if (kind_ == SpaceKind::Circle) {
    double v = x.coord();
    for (long k = 0; k < steps; ++k) v = wrap_unit(m_ * v);
    return Point::circle(v);
  }
  const auto& w = x.symbols();
  if (static_cast<long>(w.size()) <= steps)
    throw TruncationError("word too short for the requested forward iterate");
  return Point::word(std::vector<int>(w.begin() + steps, w.end()));
}

std::vector<BranchPreimage> ExpandingSystem::preimages(const Point& x) const {
  validate(x);
  std::vector<BranchPreimage> out;
  if (kind_ == SpaceKind::Circle) {
    double v = x.coord();
    out.reserve(m_);
    // (v+i)/m can round up to the next branch boundary at the seam
    for (int i = 0; i < m_; ++i)
      out.push_back({Point::circle(wrap_unit((v + i) / m_)), i});
    return out;
  }
  const auto& w = x.symbols();
  for (int s = 0; s < symbols_; ++s) {
    if (!transition_allowed(s, w[0])) continue;
    std::vector<int> word;
    word.reserve(std::min<size_t>(w.size() + 1, depth_));
    word.push_back(s);
    for (size_t i = 0; i + 1 < static_cast<size_t>(depth_) && i < w.size(); ++i)
      word.push_back(w[i]);
    out.push_back({Point::word(std::move(word)), s});
  }
  return out;
}

double ExpandingSystem::metric(const Point& x, const Point& y) const {
  validate(x);
  validate(y);
  if (kind_ == SpaceKind::Circle) return circle_distance(x.coord(), y.coord());
  const auto& a = x.symbols();
  const auto& b = y.symbols();
  size_t overlap = std::min(a.size(), b.size());
  for (size_t k = 0; k < overlap; ++k)
    if (a[k] != b[k]) return std::pow(metric_base_, static_cast<double>(k));
  return 0.0;  // equal up to truncation depth
}

Point ExpandingSystem::pull_back(const Point& z, const Point& through) const {
  validate(z);
  Point base = forward(through);
  if (kind_ == SpaceKind::Circle) {
    double diff = wrap_signed(z.coord() - base.coord());
    if (std::fabs(diff) > e0_ + 1e-12)
      throw ValidationError("pull_back: point outside the branch domain ball");
    return Point::circle(wrap_unit(through.coord() + diff / m_));
  }
  if (metric(z, base) > e0_ + 1e-15)
    throw ValidationError("pull_back: point outside the branch domain ball");
  const int head = through.symbols()[0];
  if (!transition_allowed(head, z.symbols()[0]))
    throw ValidationError("pull_back: branch undefined for this cylinder");
  std::vector<int> word;
  word.reserve(std::min<size_t>(z.symbols().size() + 1, depth_));
  word.push_back(head);
  for (size_t i = 0; i + 1 < static_cast<size_t>(depth_) && i < z.symbols().size(); ++i)
    word.push_back(z.symbols()[i]);
  return Point::word(std::move(word));
}

}  // namespace ergopt
