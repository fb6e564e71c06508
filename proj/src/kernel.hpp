#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "ergopt/grid_function.hpp"
#include "ergopt/observable.hpp"

namespace ergopt::detail {

// Per-node, per-branch tables for fast operator sweeps on a fixed grid:
// exact F values at the preimage points plus the interpolation stencil for
// reading grid functions there.
struct Kernel {
  int branches = 0;
  size_t n = 0;
  std::vector<int32_t> i0, i1;  // i0 < 0 marks a missing branch (subshifts)
  std::vector<double> w1;       // interpolation weight of i1
  std::vector<double> fval;

  // out[j] = max over branches of (fval + u at the preimage)
  void bellman(const std::vector<double>& u, std::vector<double>& out) const {
    for (size_t j = 0; j < n; ++j) {
      double best = -std::numeric_limits<double>::infinity();
      const size_t base = j * branches;
      for (int b = 0; b < branches; ++b) {
        const int32_t a = i0[base + b];
        if (a < 0) continue;
        double v = fval[base + b] + u[a];
        const double t = w1[base + b];
        if (t > 0.0) v += t * (u[i1[base + b]] - u[a]);
        if (v > best) best = v;
      }
      out[j] = best;
    }
  }

  // out[j] = sum over branches of weight * (h at the preimage)
  void weighted_sum(const std::vector<double>& weights, const std::vector<double>& h,
                    std::vector<double>& out) const {
    for (size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      const size_t base = j * branches;
      for (int b = 0; b < branches; ++b) {
        const int32_t a = i0[base + b];
        if (a < 0) continue;
        const double t = w1[base + b];
        double hv = h[a];
        if (t > 0.0) hv += t * (h[i1[base + b]] - h[a]);
        acc += weights[base + b] * hv;
      }
      out[j] = acc;
    }
  }

  // transpose action: scatter g through the same stencil
  void weighted_sum_transpose(const std::vector<double>& weights,
                              const std::vector<double>& g,
                              std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (size_t j = 0; j < n; ++j) {
      const size_t base = j * branches;
      for (int b = 0; b < branches; ++b) {
        const int32_t a = i0[base + b];
        if (a < 0) continue;
        const double t = w1[base + b];
        const double m = weights[base + b] * g[j];
        out[a] += (1.0 - t) * m;
        if (t > 0.0) out[i1[base + b]] += t * m;
      }
    }
  }
};

Kernel build_kernel(const ExpandingSystem& sys, const Observable& f,
                    const GridFunction& grid);

}  // namespace ergopt::detail
