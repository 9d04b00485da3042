#ifndef SCDYN_THRESHOLD_HPP
#define SCDYN_THRESHOLD_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "scdyn/dynamics.hpp"
#include "scdyn/errors.hpp"
#include "scdyn/lyapunov_potential.hpp"
#include "scdyn/search.hpp"
#include "scdyn/system_model.hpp"

namespace scdyn {

enum class ThresholdMethod { MinRatio, PotentialNonneg, CoupledDE, StationaryScan };

inline const char* to_string(ThresholdMethod m) {
  switch (m) {
    case ThresholdMethod::MinRatio: return "minratio";
    case ThresholdMethod::PotentialNonneg: return "potential";
    case ThresholdMethod::CoupledDE: return "coupled-de";
    case ThresholdMethod::StationaryScan: return "stationary-scan";
  }
  return "?";
}

struct ThresholdResult {
  double value = 0.0;
  double lo = 0.0, hi = 0.0;  // bracket; predicate(lo)=true, predicate(hi)=false for bisections
  ThresholdMethod method = ThresholdMethod::MinRatio;
  long evaluations = 0;
  std::optional<double> witness_x;           // scalar witness (argmin x / stationary point)
  std::optional<StateVector> witness_state;  // non-converging state at hi (coupled DE)
  double stationarity_residual = 0.0;        // minratio / cancelation cross-checks
  bool boundary_flagged = false;             // cancelation: no interior stationary point
  bool saturated_at_max = false;             // predicate never flipped on the search range
};

/// eps0 = min_{0<x<1} x / f(g(x)) by grid scan plus golden-section refinement;
/// the witness is polished on the stationarity equation F(x) - x F'(x) = 0.
inline ThresholdResult single_threshold_minratio(const SystemModel& model) {
  if (model.mode() != EpsilonMode::Multiplicative)
    throw model_error("single_threshold_minratio: needs a Multiplicative-mode model");
  const double lo = model.domain().lo, hi = model.domain().hi;
  const int kScan = 10000;
  auto ratio = [&](double x) {
    const double fx = model.composite(x);
    return fx > 0.0 ? x / fx : std::numeric_limits<double>::infinity();
  };

  double best_x = 0.0, best_r = std::numeric_limits<double>::infinity();
  long evals = 0;
  for (int k = 1; k < kScan; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / kScan;
    const double r = ratio(x);
    ++evals;
    if (r < best_r) {
      best_r = r;
      best_x = x;
    }
  }
  if (!std::isfinite(best_r)) throw model_error("single_threshold_minratio: f(g(x)) vanishes on (0,1)");

  // the ratio extends continuously onto the domain ends (it is +inf where
  // f(g(x)) vanishes), so the refinement bracket may touch them: boundary
  // infima like x/F(x) -> 1/F'(1)-type limits are then resolved too
  const double h = (hi - lo) / kScan;
  auto gm = golden_section_min(ratio, std::max(lo, best_x - h), std::min(hi, best_x + h), 1e-12);
  evals += gm.evaluations;
  double x0 = gm.x;

  // stationarity polish: the golden bracket localizes the argmin only to
  // ~sqrt(machine eps); the root of F(x) - x F'(x) pins it much tighter
  auto stat = [&](double x) { return model.composite(x) - x * model.composite_prime(x); };
  double a = std::max(lo + h / 8, x0 - 4 * h), b = std::min(hi - 1e-12, x0 + 4 * h);
  if (stat(a) * stat(b) < 0.0) {
    x0 = bisect_root(stat, a, b, 1e-15);
    evals += 50;
  }

  ThresholdResult res;
  res.method = ThresholdMethod::MinRatio;
  res.value = ratio(x0);
  res.lo = res.hi = res.value;
  res.witness_x = x0;
  res.stationarity_residual = std::abs(stat(x0));
  res.evaluations = evals;
  return res;
}

namespace detail {

inline bool single_converges_to_zero(const SystemModel& model, double eps, long max_iter, double tol) {
  double x = model.domain().hi;
  for (long it = 0; it < max_iter; ++it) {
    const double nx = model.evaluate(x, eps);
    const double step = std::abs(nx - x);
    x = nx;
    if (step < tol) break;
  }
  return std::abs(x) < tol;
}

}  // namespace detail

/// sup{eps | x^inf(1; eps) = 0} by bisection on the density-evolution predicate.
inline ThresholdResult single_threshold_de(const SystemModel& model, double tol = 1e-6,
                                           double eps_hi = 1.0, long max_iter = 1000000,
                                           double state_tol = 1e-10) {
  if (tol <= 0.0) throw parameter_error("single_threshold_de: tol must be > 0");
  auto pred = [&](double e) { return detail::single_converges_to_zero(model, e, max_iter, state_tol); };
  if (!pred(0.0)) throw model_error("single_threshold_de: model violates f(.;0) = 0");
  ThresholdResult res;
  res.method = ThresholdMethod::CoupledDE;
  if (pred(eps_hi)) {
    res.value = res.lo = res.hi = eps_hi;
    res.saturated_at_max = true;
    res.evaluations = 2;
    return res;
  }
  auto br = bisect_predicate(pred, 0.0, eps_hi, tol);
  res.lo = br.lo;
  res.hi = br.hi;
  res.value = 0.5 * (br.lo + br.hi);
  res.evaluations = br.evaluations + 2;
  return res;
}

namespace detail {

/// min_x U(x, eps) for the regular-(l,r) closed form, in long double.
inline long double ldpc_min_potential(int l, int r, long double eps, int grid) {
  long double best = 0.0L;
  long double best_x = 0.0L;
  for (int k = 1; k <= grid; ++k) {
    const long double x = static_cast<long double>(k) / grid;
    const long double u = closed_form_ldpc_ld(l, r, x, eps);
    if (u < best) {
      best = u;
      best_x = x;
    }
  }
  // ternary refinement around the best grid point
  long double a = std::max(0.0L, best_x - 1.0L / grid), b = std::min(1.0L, best_x + 1.0L / grid);
  for (int it = 0; it < 200; ++it) {
    const long double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
    if (closed_form_ldpc_ld(l, r, m1, eps) < closed_form_ldpc_ld(l, r, m2, eps))
      b = m2;
    else
      a = m1;
  }
  const long double xm = (a + b) / 2;
  return std::min(best, closed_form_ldpc_ld(l, r, xm, eps));
}

inline long double ldpc_argmin_potential(int l, int r, long double eps, int grid) {
  long double best = std::numeric_limits<long double>::infinity();
  long double best_x = 0.0L;
  for (int k = 0; k <= grid; ++k) {
    const long double x = static_cast<long double>(k) / grid;
    const long double u = closed_form_ldpc_ld(l, r, x, eps);
    if (u < best) {
      best = u;
      best_x = x;
    }
  }
  return best_x;
}

}  // namespace detail

/// sup{eps | min_x U(x; eps) >= 0} (the scalar B = g' reduction).
///
/// LDPC catalog models use the closed form in long double with an exact >= 0
/// predicate (the o(1/r) minima at l = r*alpha would drown in quadrature
/// noise). Generic models use the sampled quadrature profile with the
/// -1e-12 guard against round-off at the U = 0 boundary cases.
inline ThresholdResult potential_threshold(const SystemModel& model, int grid_size = 2000,
                                           double tol = 1e-6, double eps_hi = 1.0) {
  if (grid_size < 2) throw parameter_error("potential_threshold: grid_size must be >= 2");
  if (tol <= 0.0) throw parameter_error("potential_threshold: tol must be > 0");

  ThresholdResult res;
  res.method = ThresholdMethod::PotentialNonneg;
  long evals = 0;

  if (model.ldpc_degrees() && model.mode() == EpsilonMode::Multiplicative) {
    const auto [l, r] = *model.ldpc_degrees();
    // guard at the long-double cancellation floor near x = 0 (~1e-20); it
    // must stay far below the o(1/r) minima that carry the saturation trend
    // (-2.3e-14 at r = 40), which a coarser guard would absorb
    auto pred = [&](long double e) {
      ++evals;
      return detail::ldpc_min_potential(l, r, e, grid_size) >= -1e-18L;
    };
    if (!pred(0.0L)) throw numeric_error("potential_threshold: U(.;0) < 0 (model error)");
    if (pred(static_cast<long double>(eps_hi))) {
      res.value = res.lo = res.hi = eps_hi;
      res.saturated_at_max = true;
      res.evaluations = evals;
      res.witness_x = static_cast<double>(detail::ldpc_argmin_potential(l, r, eps_hi, grid_size));
      return res;
    }
    long double a = 0.0L, b = eps_hi;
    const long double eps_tol = std::max(static_cast<long double>(tol), 1e-17L);
    while (b - a > eps_tol) {
      const long double m = (a + b) / 2;
      if (pred(m))
        a = m;
      else
        b = m;
    }
    res.lo = static_cast<double>(a);
    res.hi = static_cast<double>(b);
    res.value = static_cast<double>((a + b) / 2);
    res.witness_x = static_cast<double>(detail::ldpc_argmin_potential(l, r, (a + b) / 2, grid_size));
    res.evaluations = evals;
    return res;
  }

  auto min_u = [&](double e) {
    auto prof = potential_profile(model, e, grid_size);
    // golden polish around the grid argmin
    const double h = model.domain().width() / grid_size;
    const double a = std::max(model.domain().lo, prof.argmin - h);
    const double b = std::min(model.domain().hi, prof.argmin + h);
    auto gm = golden_section_min([&](double x) { return potential_1d(model, x, e, 1024); }, a, b, 1e-10);
    return std::min(prof.min_value, gm.value);
  };
  auto pred = [&](double e) {
    ++evals;
    return min_u(e) >= -1e-12;
  };
  if (!pred(0.0)) {
    if (model.mode() == EpsilonMode::Multiplicative)
      throw numeric_error("potential_threshold: U(.;0) < 0 — quadrature or model error");
    // Generic systems with sigma2 > 0 legitimately fail at eps = 0
    res.value = res.lo = res.hi = 0.0;
    res.evaluations = evals;
    return res;
  }
  if (pred(eps_hi)) {
    res.value = res.lo = res.hi = eps_hi;
    res.saturated_at_max = true;
    res.evaluations = evals;
    return res;
  }
  auto br = bisect_predicate(pred, 0.0, eps_hi, tol);
  res.lo = br.lo;
  res.hi = br.hi;
  res.value = 0.5 * (br.lo + br.hi);
  {
    auto prof = potential_profile(model, res.value, grid_size);
    res.witness_x = prof.argmin;
  }
  res.evaluations = evals;
  return res;
}

struct CoupledDEOptions {
  long max_iter = 200000;
  double state_tol = 1e-10;
  double eps_hi = 1.0;
};

/// sup{eps | coupled chain from all-ones dies out} by bisection. The result
/// is specific to (L, w); a Circular boundary short-circuits to the single
/// threshold (no boundary, no coupling gain).
inline ThresholdResult coupled_threshold_de(const SystemModel& model, const CoupledConfig& cfg,
                                            double tol = 1e-6, const CoupledDEOptions& opt = {}) {
  cfg.validate();
  if (tol <= 0.0) throw parameter_error("coupled_threshold_de: tol must be > 0");
  if (cfg.boundary == Boundary::Circular) {
    auto res = single_threshold_de(model, tol, opt.eps_hi, opt.max_iter, opt.state_tol);
    res.method = ThresholdMethod::CoupledDE;
    return res;
  }
  auto pred = [&](double e) { return converges_to_zero(model, cfg, e, opt.max_iter, opt.state_tol); };
  if (!pred(0.0)) throw model_error("coupled_threshold_de: model violates f(.;0) = 0");
  ThresholdResult res;
  res.method = ThresholdMethod::CoupledDE;
  if (pred(opt.eps_hi)) {
    res.value = res.lo = res.hi = opt.eps_hi;
    res.saturated_at_max = true;
    res.evaluations = 2;
    return res;
  }
  auto br = bisect_predicate(pred, 0.0, opt.eps_hi, tol);
  res.lo = br.lo;
  res.hi = br.hi;
  res.value = 0.5 * (br.lo + br.hi);
  res.evaluations = br.evaluations + 2;
  StateVector x(static_cast<std::size_t>(cfg.L), model.domain().hi);
  auto tr = run_coupled(model, cfg, std::move(x), br.hi, RunOptions{opt.max_iter, opt.state_tol, 0});
  res.witness_state = tr.states.back();
  return res;
}

/// Load threshold of the cancelation system x -> alpha g(x) + sigma2:
/// scans for stationary points of (x - sigma2)/g(x), i.e. roots of
/// g(x) - (x - sigma2) g'(x), and returns the smallest ratio. When no
/// interior stationary point exists the result is flagged and carries the
/// infimum of the ratio over the scan range.
inline ThresholdResult cancelation_threshold(const SystemModel& model, int scan_points = 4096) {
  if (!model.cancelation_sigma2())
    throw model_error("cancelation_threshold: model was not built by make_cancelation");
  const double s2 = *model.cancelation_sigma2();
  const double xmax = model.domain().hi;
  if (xmax <= s2) throw model_error("cancelation_threshold: empty range (domain max <= sigma2)");

  auto phi = [&](double x) { return model.g(x) - (x - s2) * model.g_prime(x); };
  auto ratio = [&](double x) {
    const double gv = model.g(x);
    return gv > 0.0 ? (x - s2) / gv : std::numeric_limits<double>::infinity();
  };

  const double a0 = s2 + (xmax - s2) * 1e-4;
  std::vector<double> roots;
  double prev_x = a0, prev_phi = phi(a0);
  for (int k = 1; k <= scan_points; ++k) {
    const double x = a0 + (xmax - a0) * static_cast<double>(k) / scan_points;
    const double p = phi(x);
    if (prev_phi == 0.0)
      roots.push_back(prev_x);
    else if (prev_phi * p < 0.0)
      roots.push_back(bisect_root(phi, prev_x, x, 1e-14));
    prev_x = x;
    prev_phi = p;
  }

  ThresholdResult res;
  res.method = ThresholdMethod::StationaryScan;
  res.evaluations = scan_points;

  if (roots.empty()) {
    double best = std::numeric_limits<double>::infinity(), best_x = a0;
    for (int k = 0; k <= scan_points; ++k) {
      const double x = a0 + (xmax - a0) * static_cast<double>(k) / scan_points;
      const double r = ratio(x);
      if (r < best) {
        best = r;
        best_x = x;
      }
    }
    res.boundary_flagged = true;
    res.value = res.lo = res.hi = best;
    res.witness_x = best_x;
    return res;
  }

  double alpha0 = std::numeric_limits<double>::infinity(), x0 = roots.front();
  for (double xr : roots) {
    const double r = ratio(xr);
    if (r < alpha0) {
      alpha0 = r;
      x0 = xr;
    }
  }
  res.value = res.lo = res.hi = alpha0;
  res.witness_x = x0;
  // scheme2d cross-check: alpha0 g'(x0) = 1 at a stationary point
  res.stationarity_residual = std::abs(alpha0 * model.g_prime(x0) - 1.0);
  return res;
}

}  // namespace scdyn

#endif  // SCDYN_THRESHOLD_HPP
