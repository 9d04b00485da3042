#ifndef SCDYN_DYNAMICS_HPP
#define SCDYN_DYNAMICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "scdyn/errors.hpp"
#include "scdyn/system_model.hpp"

namespace scdyn {

using StateVector = std::vector<double>;

enum class CouplingVariant {
  InsideAverage,   // x_i' = f(g((1/w^2) sum_j sum_k x_{i+j-k}); eps)
  OutsideAverage,  // x_i' = (1/w) sum_k f((1/w) sum_j g(x_{i+j-k}); eps)
};

enum class Boundary {
  Anchored,  // x_i = 0 outside {0,...,L-1} (perfect side information)
  Circular,  // indices mod L
};

inline const char* to_string(CouplingVariant v) {
  return v == CouplingVariant::InsideAverage ? "inside" : "outside";
}
inline const char* to_string(Boundary b) { return b == Boundary::Anchored ? "anchored" : "circular"; }

struct CoupledConfig {
  int L = 1;
  int w = 1;
  CouplingVariant variant = CouplingVariant::InsideAverage;
  Boundary boundary = Boundary::Anchored;

  /// Convergence-theory regime L >= 2w+1 (the coupling window fits inside
  /// the chain). Violating it is legal but worth a warning.
  bool theorem_regime() const { return L >= 2 * w + 1; }

  void validate() const {
    if (L < 1) throw parameter_error("CoupledConfig: L must be >= 1");
    if (w < 1) throw parameter_error("CoupledConfig: w must be >= 1");
  }
};

struct Trajectory {
  std::vector<StateVector> states;  // recorded every `record_stride` steps (plus first and last)
  double epsilon = 0.0;
  bool converged_to_zero = false;
  long iterations = 0;
  double final_residual = 0.0;  // max-norm of the last step difference
  int record_stride = 1;
};

inline double max_norm(const StateVector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs_diff(const StateVector& a, const StateVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

namespace detail {

inline double state_at(const StateVector& x, long idx, Boundary b) {
  const long L = static_cast<long>(x.size());
  if (b == Boundary::Circular) {
    idx %= L;
    if (idx < 0) idx += L;
    return x[static_cast<std::size_t>(idx)];
  }
  if (idx < 0 || idx >= L) return 0.0;  // anchor value
  return x[static_cast<std::size_t>(idx)];
}

}  // namespace detail

/// One synchronous update of the coupled chain.
inline StateVector coupled_step(const SystemModel& model, const CoupledConfig& cfg,
                                const StateVector& x, double epsilon) {
  cfg.validate();
  if (static_cast<int>(x.size()) != cfg.L)
    throw shape_error("coupled_step: state length " + std::to_string(x.size()) +
                      " does not match L=" + std::to_string(cfg.L));

  const int L = cfg.L, w = cfg.w;
  StateVector out(static_cast<std::size_t>(L));

  if (cfg.variant == CouplingVariant::InsideAverage) {
    // y_i = sum_m (w-|m|) x_{i+m} / w^2, then one model update of y_i.
    const double inv_w2 = 1.0 / (static_cast<double>(w) * w);
    for (int i = 0; i < L; ++i) {
      double acc = 0.0;
      for (int m = -(w - 1); m <= w - 1; ++m)
        acc += (w - std::abs(m)) * detail::state_at(x, i + m, cfg.boundary);
      out[static_cast<std::size_t>(i)] = model.evaluate(model.domain().clamp(acc * inv_w2), epsilon);
    }
  } else {
    // inner_m = (1/w) sum_j g(x_{m+j}); x_i' = (1/w) sum_k f(inner_{i-k}; eps)
    const double g_anchor = model.g(0.0);
    std::vector<double> gx(static_cast<std::size_t>(L));
    for (int i = 0; i < L; ++i) gx[static_cast<std::size_t>(i)] = model.g(x[static_cast<std::size_t>(i)]);
    auto g_at = [&](long idx) {
      if (cfg.boundary == Boundary::Circular) {
        idx %= L;
        if (idx < 0) idx += L;
        return gx[static_cast<std::size_t>(idx)];
      }
      return (idx < 0 || idx >= L) ? g_anchor : gx[static_cast<std::size_t>(idx)];
    };
    std::vector<double> inner(static_cast<std::size_t>(L + w - 1));
    for (int m = -(w - 1); m <= L - 1; ++m) {
      double s = 0.0;
      for (int j = 0; j < w; ++j) s += g_at(m + j);
      inner[static_cast<std::size_t>(m + w - 1)] = s / w;
    }
    for (int i = 0; i < L; ++i) {
      double s = 0.0;
      for (int k = 0; k < w; ++k) s += model.f(inner[static_cast<std::size_t>(i - k + w - 1)], epsilon);
      out[static_cast<std::size_t>(i)] = model.domain().clamp(s / w);
    }
  }
  return out;
}

struct RunOptions {
  long max_iter = 1000000;
  double tol = 1e-10;       // max-norm step tolerance; also the zero-state threshold
  int record_stride = 1;    // <= 0 disables intermediate recording
};

/// Repeats coupled_step until the step norm drops below tol (or max_iter).
/// converged_to_zero is decided on the state norm, not the step norm.
inline Trajectory run_coupled(const SystemModel& model, const CoupledConfig& cfg, StateVector x0,
                              double epsilon, const RunOptions& opt = {}) {
  cfg.validate();
  if (opt.tol <= 0.0) throw parameter_error("run_coupled: tol must be > 0");
  Trajectory tr;
  tr.epsilon = epsilon;
  tr.record_stride = opt.record_stride;
  StateVector x = std::move(x0);
  if (opt.record_stride > 0) tr.states.push_back(x);
  double step = 0.0;
  long it = 0;
  for (; it < opt.max_iter; ) {
    StateVector nx = coupled_step(model, cfg, x, epsilon);
    step = max_abs_diff(nx, x);
    x = std::move(nx);
    ++it;
    if (opt.record_stride > 0 && (it % opt.record_stride == 0)) tr.states.push_back(x);
    if (step < opt.tol) break;
  }
  if (opt.record_stride > 0 && (it % opt.record_stride != 0)) tr.states.push_back(x);
  if (opt.record_stride <= 0) tr.states.push_back(x);
  tr.iterations = it;
  tr.final_residual = step;
  tr.converged_to_zero = max_norm(x) < opt.tol;
  return tr;
}

inline Trajectory run_coupled(const SystemModel& model, const CoupledConfig& cfg, const StateVector& x0,
                              double epsilon, long max_iter, double tol) {
  return run_coupled(model, cfg, x0, epsilon, RunOptions{max_iter, tol, 1});
}

/// Single-system recursion x -> f(g(x); eps) from x0.
inline Trajectory iterate_single(const SystemModel& model, double x0, double epsilon,
                                 long max_iter = 1000000, double tol = 1e-10) {
  CoupledConfig cfg;  // L = 1, w = 1: both variants coincide with the scalar map
  return run_coupled(model, cfg, StateVector{x0}, epsilon, RunOptions{max_iter, tol, 1});
}

/// Predicate core for threshold bisections: no state recording.
inline bool converges_to_zero(const SystemModel& model, const CoupledConfig& cfg, double epsilon,
                              long max_iter = 200000, double tol = 1e-10) {
  StateVector x(static_cast<std::size_t>(cfg.L), model.domain().hi);
  auto tr = run_coupled(model, cfg, std::move(x), epsilon, RunOptions{max_iter, tol, 0});
  return tr.converged_to_zero;
}

/// Limit of run_coupled from all-ones (the worst state). Non-convergence
/// within max_iter raises nonconvergence_error carrying the partial state.
inline StateVector find_fixed_point(const SystemModel& model, const CoupledConfig& cfg, double epsilon,
                                    double tol = 1e-10, long max_iter = 1000000) {
  if (tol <= 0.0) throw parameter_error("find_fixed_point: tol must be > 0");
  StateVector x(static_cast<std::size_t>(cfg.L), model.domain().hi);
  auto tr = run_coupled(model, cfg, std::move(x), epsilon, RunOptions{max_iter, tol, 0});
  StateVector fp = tr.states.back();
  const double resid = max_abs_diff(coupled_step(model, cfg, fp, epsilon), fp);
  if (tr.final_residual >= tol || resid > 10.0 * tol)
    throw nonconvergence_error("find_fixed_point: no convergence within max_iter", fp, resid);
  return fp;
}

}  // namespace scdyn

#endif  // SCDYN_DYNAMICS_HPP
