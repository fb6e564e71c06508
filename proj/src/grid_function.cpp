#include "ergopt/grid_function.hpp"

#include <algorithm>
#include <cmath>

namespace ergopt {

Point GridFunction::node_point(size_t i) const {
  if (kind == SpaceKind::Circle)
    return Point::circle(static_cast<double>(i) / resolution);
  return Point::word(decode_word(node_code[i]));
}

std::vector<int> GridFunction::decode_word(long code) const {
  std::vector<int> w(depth);
  for (int k = depth - 1; k >= 0; --k) {
    w[k] = static_cast<int>(code % symbols);
    code /= symbols;
  }
  return w;
}

long GridFunction::encode_word(const std::vector<int>& w) const {
  long code = 0;
  for (int k = 0; k < depth; ++k) code = code * symbols + w[k];
  return code;
}

long GridFunction::slot_of_point(const Point& x) const {
  const auto& w = x.symbols();
  if (static_cast<int>(w.size()) < depth)
    throw TruncationError("word shorter than the grid cylinder depth");
  long code = 0;
  for (int k = 0; k < depth; ++k) code = code * symbols + w[k];
  long slot = slot_of[code];
  if (slot < 0) throw ValidationError("word inadmissible on this grid");
  return slot;
}

double GridFunction::value_at(const ExpandingSystem& sys, const Point& x) const {
  sys.validate(x);
  if (kind == SpaceKind::Circle) {
    double pos = x.coord() * resolution;
    long j = static_cast<long>(std::floor(pos));
    double frac = pos - static_cast<double>(j);
    j %= resolution;
    long j1 = (j + 1) % resolution;
    return (1.0 - frac) * values[j] + frac * values[j1];
  }
  return values[slot_of_point(x)];
}

double GridFunction::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

double GridFunction::min_value() const {
  return *std::min_element(values.begin(), values.end());
}

double GridFunction::discrete_lip(const ExpandingSystem& sys) const {
  if (kind == SpaceKind::Circle) {
    double worst = 0.0;
    for (int j = 0; j < resolution; ++j) {
      double slope = std::fabs(values[(j + 1) % resolution] - values[j]) * resolution;
      worst = std::max(worst, slope);
    }
    return worst;
  }
  // For each prefix length k, the value range within a common k-prefix group
  // bounds |u(v)-u(w)| for pairs at word distance base^k; the max over k is
  // the exact Lipschitz constant of the table.
  const double base = sys.metric_base();
  double worst = 0.0;
  // codes are sorted, so equal k-prefix groups are contiguous
  std::vector<long> prefix(node_code.size());
  for (int k = 0; k < depth; ++k) {
    long div = 1;
    for (int t = 0; t < depth - k; ++t) div *= symbols;
    for (size_t i = 0; i < node_code.size(); ++i) prefix[i] = node_code[i] / div;
    double scale = std::pow(base, static_cast<double>(k));
    size_t i = 0;
    while (i < node_code.size()) {
      size_t j = i;
      double lo = values[i], hi = values[i];
      while (j + 1 < node_code.size() && prefix[j + 1] == prefix[i]) {
        ++j;
        lo = std::min(lo, values[j]);
        hi = std::max(hi, values[j]);
      }
      worst = std::max(worst, (hi - lo) / scale);
      i = j + 1;
    }
  }
  return worst;
}

GridFunction make_grid(const ExpandingSystem& sys, int size, double fill) {
  GridFunction g;
  g.kind = sys.kind();
  if (sys.is_circle()) {
    if (size < 2) throw ValidationError("circle grid needs at least 2 nodes");
    g.resolution = size;
    g.values.assign(static_cast<size_t>(size), fill);
    return g;
  }
  if (size < 1) throw ValidationError("cylinder grid depth must be >= 1");
  if (size > sys.truncation_depth())
    throw ValidationError("cylinder grid depth exceeds the truncation depth");
  g.depth = size;
  g.symbols = sys.symbol_count();
  long total = 1;
  for (int k = 0; k < size; ++k) {
    total *= g.symbols;
    if (total > (1L << 24)) throw BudgetExceeded("cylinder grid too large");
  }
  g.slot_of.assign(total, -1);
  for (long code = 0; code < total; ++code) {
    // admissibility of consecutive symbols
    bool ok = true;
    if (sys.has_matrix()) {
      long c = code;
      int prev = -1;
      for (int k = 0; k < size; ++k) {
        long div = 1;
        for (int t = 0; t < size - 1 - k; ++t) div *= g.symbols;
        int sym = static_cast<int>((c / div) % g.symbols);
        if (prev >= 0 && !sys.transition_allowed(prev, sym)) {
          ok = false;
          break;
        }
        prev = sym;
      }
    }
    if (ok) {
      g.slot_of[code] = static_cast<long>(g.node_code.size());
      g.node_code.push_back(code);
    }
  }
  g.values.assign(g.node_code.size(), fill);
  return g;
}

}  // namespace ergopt
