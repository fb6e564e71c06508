#include "kernel.hpp"

#include <cmath>

#include "ergopt/errors.hpp"

namespace ergopt::detail {

Kernel build_kernel(const ExpandingSystem& sys, const Observable& f,
                    const GridFunction& grid) {
  Kernel k;
  k.n = grid.node_count();
  if (sys.is_circle()) {
    const int m = sys.circle_m();
    const int g = grid.resolution;
    k.branches = m;
    k.i0.resize(k.n * m);
    k.i1.resize(k.n * m);
    k.w1.resize(k.n * m);
    k.fval.resize(k.n * m);
    for (int j = 0; j < g; ++j) {
      for (int b = 0; b < m; ++b) {
        const size_t t = static_cast<size_t>(j) * m + b;
        double pos = (static_cast<double>(j) + static_cast<double>(b) * g) / m;
        int idx = static_cast<int>(std::floor(pos));
        k.i0[t] = idx % g;
        k.i1[t] = (idx + 1) % g;
        k.w1[t] = pos - idx;
        k.fval[t] = f.evaluate(sys, Point::circle(pos / g));
      }
    }
    return k;
  }
  const int nsym = sys.symbol_count();
  const int r = grid.depth;
  if (r + 1 > sys.truncation_depth())
    throw ValidationError("grid depth too close to the truncation depth");
  k.branches = nsym;
  k.i0.assign(k.n * nsym, -1);
  k.i1.assign(k.n * nsym, -1);
  k.w1.assign(k.n * nsym, 0.0);
  k.fval.assign(k.n * nsym, 0.0);
  long head_div = 1;
  for (int i = 0; i < r - 1; ++i) head_div *= nsym;
  for (size_t slot = 0; slot < k.n; ++slot) {
    long code = grid.node_code[slot];
    int first = static_cast<int>(code / head_div);
    std::vector<int> word = grid.decode_word(code);
    for (int s = 0; s < nsym; ++s) {
      if (!sys.transition_allowed(s, first)) continue;
      long precode = s * head_div + code / nsym;
      long preslot = grid.slot_of[precode];
      if (preslot < 0) continue;
      const size_t t = slot * nsym + s;
      k.i0[t] = static_cast<int32_t>(preslot);
      std::vector<int> full;
      full.reserve(word.size() + 1);
      full.push_back(s);
      full.insert(full.end(), word.begin(), word.end());
      k.fval[t] = f.evaluate(sys, Point::word(std::move(full)));
    }
  }
  return k;
}

}  // namespace ergopt::detail
