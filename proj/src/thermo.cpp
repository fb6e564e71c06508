#include "ergopt/thermo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "kernel.hpp"

namespace ergopt {

namespace {

using detail::Kernel;
using detail::build_kernel;

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

// pushforward defect of node weights under T, measured on the coarsest
// partition whose preimages are exact unions of grid cells
double invariance_defect(const ExpandingSystem& sys, const GridFunction& grid,
                         const std::vector<double>& weights) {
  if (sys.is_circle()) {
    const int g = grid.resolution;
    const int m = sys.circle_m();
    if (g % m == 0) {
      // coarse cell B_k = [mk/g, m(k+1)/g); T^-1(B_k) = union of cells k + b*g/m
      const int coarse = g / m;
      double defect = 0.0;
      for (int k = 0; k < coarse; ++k) {
        double direct = 0.0, pulled = 0.0;
        for (int b = 0; b < m; ++b) {
          direct += weights[static_cast<size_t>(m * k + b)];
          pulled += weights[static_cast<size_t>(k + b * coarse)];
        }
        defect += std::fabs(direct - pulled);
      }
      return defect;
    }
    // grid not commensurate with the branch count: interpolated pushforward
    std::vector<double> push(g, 0.0);
    for (int j = 0; j < g; ++j) {
      double pos = std::fmod(static_cast<double>(m) * j, static_cast<double>(g));
      int i = static_cast<int>(std::floor(pos));
      double t = pos - i;
      push[static_cast<size_t>(i % g)] += (1.0 - t) * weights[j];
      push[static_cast<size_t>((i + 1) % g)] += t * weights[j];
    }
    double defect = 0.0;
    for (int j = 0; j < g; ++j) defect += std::fabs(push[j] - weights[j]);
    return defect;
  }
  // compare mu(B) with mu(T^-1 B) over depth r-1 cylinders
  const int nsym = grid.symbols;
  long tail_mod = 1;
  for (int i = 0; i < grid.depth - 1; ++i) tail_mod *= nsym;
  std::vector<double> head(tail_mod, 0.0), tail(tail_mod, 0.0);
  for (size_t slot = 0; slot < grid.node_count(); ++slot) {
    long code = grid.node_code[slot];
    head[code / nsym] += weights[slot];  // first r-1 symbols
    tail[code % tail_mod] += weights[slot];
  }
  double defect = 0.0;
  for (long c = 0; c < tail_mod; ++c) defect += std::fabs(tail[c] - head[c]);
  return defect;
}

}  // namespace

GridFunction transfer_apply(const ExpandingSystem& sys, const Observable& f, double beta,
                            const GridFunction& h) {
  if (beta * f.sup_bound() > 700.0)
    throw OverflowGuard(
        "beta * sup|F| > 700 would overflow exp(); use the normalized stepping of "
        "equilibrium_state");
  Kernel kernel = build_kernel(sys, f, h);
  std::vector<double> weights(kernel.fval.size(), 0.0);
  for (size_t t = 0; t < weights.size(); ++t) weights[t] = std::exp(beta * kernel.fval[t]);
  GridFunction out = h;
  kernel.weighted_sum(weights, h.values, out.values);
  return out;
}

namespace {

constexpr double kLogZero = -std::numeric_limits<double>::infinity();

double log_sum_exp(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

// Log-space power iteration for the right/left eigenvectors. One operator
// step can span a dynamic range like exp(beta * osc(F)), which overflows any
// linear representation at large beta; iterating log h is stable for all
// beta. Entries drop to -inf where the mass is genuinely zero.
struct LogTransfer {
  const Kernel& kernel;
  std::vector<double> logw;  // beta * (F - max F) per (node, branch)

  LogTransfer(const Kernel& k, double beta, double fmax) : kernel(k) {
    logw.assign(k.fval.size(), kLogZero);
    for (size_t t = 0; t < logw.size(); ++t)
      if (k.i0[t] >= 0) logw[t] = beta * (k.fval[t] - fmax);
  }

  double interp_log(const std::vector<double>& l, size_t t) const {
    const double w1 = kernel.w1[t];
    double a = l[kernel.i0[t]];
    if (w1 <= 0.0) return a;
    a = (a == kLogZero) ? kLogZero : a + std::log1p(-w1);
    double b = l[kernel.i1[t]];
    b = (b == kLogZero) ? kLogZero : b + std::log(w1);
    return log_sum_exp(a, b);
  }

  // returns the shift max(out) before normalization
  double step(const std::vector<double>& l, std::vector<double>& out) const {
    for (size_t j = 0; j < kernel.n; ++j) {
      double acc = kLogZero;
      const size_t base = j * kernel.branches;
      for (int b = 0; b < kernel.branches; ++b) {
        const size_t t = base + b;
        if (kernel.i0[t] < 0) continue;
        acc = log_sum_exp(acc, logw[t] + interp_log(l, t));
      }
      out[j] = acc;
    }
    double m = *std::max_element(out.begin(), out.end());
    for (double& v : out) v -= m;
    return m;
  }

  double step_transpose(const std::vector<double>& l, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), kLogZero);
    for (size_t j = 0; j < kernel.n; ++j) {
      const size_t base = j * kernel.branches;
      for (int b = 0; b < kernel.branches; ++b) {
        const size_t t = base + b;
        if (kernel.i0[t] < 0 || l[j] == kLogZero) continue;
        const double w1 = kernel.w1[t];
        double m0 = logw[t] + l[j] + (w1 > 0.0 ? std::log1p(-w1) : 0.0);
        out[kernel.i0[t]] = log_sum_exp(out[kernel.i0[t]], m0);
        if (w1 > 0.0)
          out[kernel.i1[t]] =
              log_sum_exp(out[kernel.i1[t]], logw[t] + l[j] + std::log(w1));
      }
    }
    double m = *std::max_element(out.begin(), out.end());
    for (double& v : out) v -= m;
    return m;
  }
};

}  // namespace

GibbsState equilibrium_state(const ExpandingSystem& sys, const Observable& f, double beta,
                             int resolution, double tol, long max_iter) {
  if (tol <= 0.0) throw ValidationError("tolerance must be positive");
  GridFunction grid = make_grid(sys, resolution);
  Kernel kernel = build_kernel(sys, f, grid);
  const size_t n = kernel.n;

  double fmax = -std::numeric_limits<double>::infinity();
  double fmin = std::numeric_limits<double>::infinity();
  for (size_t t = 0; t < kernel.fval.size(); ++t)
    if (kernel.i0[t] >= 0) {
      fmax = std::max(fmax, kernel.fval[t]);
      fmin = std::min(fmin, kernel.fval[t]);
    }

  GibbsState state;
  state.beta = beta;

  std::vector<double> h, g;
  double log_lam = 0.0;
  double resid = std::numeric_limits<double>::infinity();
  long iter = 0;

  if (beta * (fmax - fmin) <= 500.0) {
    std::vector<double> weights(kernel.fval.size(), 0.0);
    for (size_t t = 0; t < weights.size(); ++t)
      if (kernel.i0[t] >= 0) weights[t] = std::exp(beta * (kernel.fval[t] - fmax));

    // Averaged (damped) iteration: when the maximizing orbit has period p the
    // top of the spectrum is a cluster of p phases of equal modulus and the
    // raw power iteration cycles without settling; averaging with the
    // previous iterate damps every phase mode except 1.
    h.assign(n, 1.0);
    std::vector<double> lh(n);
    double lam = 1.0;
    for (; iter < max_iter; ++iter) {
      kernel.weighted_sum(weights, h, lh);
      double lam_new = sup_norm(lh);
      if (lam_new <= 0.0) throw NotConverged("transfer iteration collapsed to zero");
      double defect = 0.0;
      for (size_t j = 0; j < n; ++j)
        defect = std::max(defect, std::fabs(lh[j] - lam_new * h[j]));
      resid = defect / lam_new;
      for (size_t j = 0; j < n; ++j) h[j] = 0.5 * h[j] + 0.5 * lh[j] / lam_new;
      double hmax = sup_norm(h);
      for (size_t j = 0; j < n; ++j) h[j] /= hmax;
      bool settled = std::fabs(lam_new - lam) <= tol * lam_new;
      lam = lam_new;
      if (resid <= tol && settled && iter > 2) break;
    }
    log_lam = std::log(lam);

    g.assign(n, 1.0 / static_cast<double>(n));
    std::vector<double> lg(n);
    for (long it = 0; it < max_iter; ++it) {
      kernel.weighted_sum_transpose(weights, g, lg);
      double norm = 0.0;
      for (double v : lg) norm += v;
      if (norm <= 0.0) throw NotConverged("adjoint transfer iteration collapsed to zero");
      double defect = 0.0;
      for (size_t j = 0; j < n; ++j)
        defect = std::max(defect, std::fabs(lg[j] / norm - g[j]));
      for (size_t j = 0; j < n; ++j) g[j] = 0.5 * g[j] + 0.5 * lg[j] / norm;
      double gnorm = 0.0;
      for (double v : g) gnorm += v;
      for (size_t j = 0; j < n; ++j) g[j] /= gnorm;
      if (defect <= tol && it > 2) break;
      ++iter;
    }
  } else {
    LogTransfer op(kernel, beta, fmax);
    const double log_half = std::log(0.5);
    std::vector<double> lvec(n, 0.0), lnext(n);
    double shift = 0.0;
    for (; iter < max_iter; ++iter) {
      double m = op.step(lvec, lnext);
      double defect = 0.0;
      for (size_t j = 0; j < n; ++j)
        defect = std::max(defect, std::fabs(std::exp(lnext[j]) - std::exp(lvec[j])));
      bool settled = std::fabs(m - shift) <= tol * std::max(1.0, std::fabs(m));
      shift = m;
      // damped update in log space
      double mx = kLogZero;
      for (size_t j = 0; j < n; ++j) {
        lvec[j] = log_sum_exp(lvec[j] + log_half, lnext[j] + log_half);
        mx = std::max(mx, lvec[j]);
      }
      for (size_t j = 0; j < n; ++j) lvec[j] -= mx;
      resid = defect;
      if (defect <= tol && settled && iter > 2) break;
    }
    h.resize(n);
    for (size_t j = 0; j < n; ++j) h[j] = std::exp(lvec[j]);
    // exact residual and eigenvalue of the final (damped, renormalized) vector
    {
      std::vector<double> acc(n, kLogZero);
      double m_exact = kLogZero;
      for (size_t j = 0; j < n; ++j) {
        const size_t base = j * kernel.branches;
        for (int b = 0; b < kernel.branches; ++b) {
          const size_t t = base + b;
          if (kernel.i0[t] < 0) continue;
          acc[j] = log_sum_exp(acc[j], op.logw[t] + op.interp_log(lvec, t));
        }
        m_exact = std::max(m_exact, acc[j]);
      }
      double defect = 0.0;
      for (size_t j = 0; j < n; ++j)
        defect = std::max(defect,
                          std::fabs((acc[j] == kLogZero ? 0.0 : std::exp(acc[j] - m_exact)) -
                                    h[j]));
      resid = defect;
      log_lam = m_exact;
    }
    (void)shift;

    std::vector<double> lg(n, 0.0), lgnext(n);
    for (long it = 0; it < max_iter; ++it) {
      op.step_transpose(lg, lgnext);
      double defect = 0.0;
      for (size_t j = 0; j < n; ++j)
        defect = std::max(defect, std::fabs(std::exp(lgnext[j]) - std::exp(lg[j])));
      double mx = kLogZero;
      for (size_t j = 0; j < n; ++j) {
        lg[j] = log_sum_exp(lg[j] + log_half, lgnext[j] + log_half);
        mx = std::max(mx, lg[j]);
      }
      for (size_t j = 0; j < n; ++j) lg[j] -= mx;
      if (defect <= tol && it > 2) break;
      ++iter;
    }
    g.resize(n);
    for (size_t j = 0; j < n; ++j) g[j] = std::exp(lg[j]);
    double total = 0.0;
    for (double v : g) total += v;
    for (double& v : g) v /= total;

    // combine the eigenvectors in log space: the pointwise product can
    // underflow even when each factor is representable
    std::vector<double> lw(n, kLogZero);
    double m = kLogZero;
    for (size_t j = 0; j < n; ++j) {
      if (lvec[j] != kLogZero && lg[j] != kLogZero) lw[j] = lvec[j] + lg[j];
      m = std::max(m, lw[j]);
    }
    if (m == kLogZero) throw NotConverged("degenerate eigenvector product");
    state.measure_weights.resize(n);
    double wtotal = 0.0;
    for (size_t j = 0; j < n; ++j) {
      state.measure_weights[j] = lw[j] == kLogZero ? 0.0 : std::exp(lw[j] - m);
      wtotal += state.measure_weights[j];
    }
    for (double& w : state.measure_weights) w /= wtotal;
  }

  state.residual = resid;
  state.converged = resid <= tol;
  state.pressure = beta * fmax + log_lam;
  state.eigenvalue = std::exp(state.pressure);
  state.iterations = iter;

  if (state.measure_weights.empty()) {
    state.measure_weights.resize(n);
    double total = 0.0;
    for (size_t j = 0; j < n; ++j) {
      state.measure_weights[j] = h[j] * g[j];
      total += state.measure_weights[j];
    }
    if (total <= 0.0) throw NotConverged("degenerate eigenvector product");
    for (double& wgt : state.measure_weights) wgt /= total;
  }

  state.density = grid;
  state.density.values = std::move(h);
  state.conjugate = grid;
  state.conjugate.values = std::move(g);
  state.invariance_defect = invariance_defect(sys, state.density, state.measure_weights);
  return state;
}

double integrate(const ExpandingSystem& sys, const GibbsState& state, const Observable& f) {
  double acc = 0.0;
  for (size_t j = 0; j < state.measure_weights.size(); ++j)
    acc += state.measure_weights[j] * f.evaluate(sys, state.density.node_point(j));
  return acc;
}

double mass_within(const ExpandingSystem& sys, const GibbsState& state,
                   const std::vector<Point>& set, double radius) {
  double acc = 0.0;
  for (size_t j = 0; j < state.measure_weights.size(); ++j) {
    Point x = state.density.node_point(j);
    for (const auto& p : set) {
      if (sys.metric(x, p) <= radius) {
        acc += state.measure_weights[j];
        break;
      }
    }
  }
  return acc;
}

SweepTable beta_sweep(const ExpandingSystem& sys, const Observable& f,
                      const std::vector<double>& schedule,
                      const std::vector<Observable>& test_functions,
                      const std::vector<PeriodicOrbit>& candidates, double orbit_radius,
                      int resolution, double tol, long max_iter, int threads) {
  for (size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1])
      throw ValidationError("beta schedule must be strictly increasing");

  SweepTable table;
  table.rows.resize(schedule.size());

  auto run_one = [&](size_t i) {
    GibbsState state = equilibrium_state(sys, f, schedule[i], resolution, tol, max_iter);
    SweepRow row;
    row.beta = schedule[i];
    row.pressure = state.pressure;
    row.converged = state.converged;
    for (const auto& tf : test_functions) row.integrals.push_back(integrate(sys, state, tf));
    for (const auto& orbit : candidates)
      row.orbit_mass.push_back(mass_within(sys, state, orbit.points, orbit_radius));
    table.rows[i] = std::move(row);
  };

  threads = std::max(1, threads);
  if (threads == 1 || schedule.size() < 2) {
    for (size_t i = 0; i < schedule.size(); ++i) run_one(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < schedule.size(); i = next.fetch_add(1))
          run_one(i);
      });
    for (auto& th : pool) th.join();
  }

  for (size_t i = 0; i < table.rows.size(); ++i) {
    auto& row = table.rows[i];
    if (i == 0) {
      row.integral_diffs.assign(row.integrals.size(), 0.0);
      continue;
    }
    const auto& prev = table.rows[i - 1];
    row.pressure_slope = (row.pressure - prev.pressure) / (row.beta - prev.beta);
    for (size_t k = 0; k < row.integrals.size(); ++k)
      row.integral_diffs.push_back(std::fabs(row.integrals[k] - prev.integrals[k]));
  }
  return table;
}

}  // namespace ergopt
