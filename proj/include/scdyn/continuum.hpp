#ifndef SCDYN_CONTINUUM_HPP
#define SCDYN_CONTINUUM_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <vector>

#include "scdyn/dynamics.hpp"
#include "scdyn/errors.hpp"
#include "scdyn/system_model.hpp"

namespace scdyn {

struct ContinuumProfile {
  std::vector<double> grid;    // mesh on [-alpha, alpha]
  std::vector<double> values;  // v(x)
  double mesh_step = 0.0;
  double epsilon = 0.0;
  bool converged = false;
  long iterations = 0;
  double residual = 0.0;  // sup-norm of the last Picard step
};

/// Triangular kernel weights a(m) = w - |m| for m in {-(w-1), ..., w-1}.
inline std::vector<double> triangular_weights(int w) {
  if (w < 1) throw parameter_error("triangular_weights: w must be >= 1");
  std::vector<double> a(static_cast<std::size_t>(2 * w - 1));
  for (int m = -(w - 1); m <= w - 1; ++m)
    a[static_cast<std::size_t>(m + w - 1)] = static_cast<double>(w - std::abs(m));
  return a;
}

struct KernelAverageError {
  double discrete = 0.0;
  double integral = 0.0;
  double gap = 0.0;
};

/// Compares the discrete window average y_i = (1/w^2) sum a(m) x_{i+m} with
/// its continuum form (1/w^2) int_{-w}^{w} (w-|r|) x(i+r) dr, where x(.) is
/// the piecewise-linear interpolant (zero outside the chain). The gap obeys
/// the 1/w bound, which is asserted.
inline KernelAverageError kernel_average_error(const StateVector& x, int i, int w) {
  const int L = static_cast<int>(x.size());
  if (w < 1) throw parameter_error("kernel_average_error: w must be >= 1");
  if (i < w - 1 || i > L - w)
    throw parameter_error("kernel_average_error: index must be interior (w-1 <= i <= L-w)");

  const double inv_w2 = 1.0 / (static_cast<double>(w) * w);
  KernelAverageError res;
  for (int m = -(w - 1); m <= w - 1; ++m) res.discrete += (w - std::abs(m)) * x[static_cast<std::size_t>(i + m)];
  res.discrete *= inv_w2;

  auto sample = [&](double t) {  // piecewise-linear interpolant, 0 outside
    const double fl = std::floor(t);
    const int j = static_cast<int>(fl);
    const double frac = t - fl;
    auto val = [&](int k) { return (k < 0 || k >= L) ? 0.0 : x[static_cast<std::size_t>(k)]; };
    return (1.0 - frac) * val(j) + frac * val(j + 1);
  };
  // kernel and interpolant are both piecewise linear with knots on the
  // integers, so per-unit-interval Simpson integrates the product exactly
  double integral = 0.0;
  for (int t = -w; t < w; ++t) {
    auto p = [&](double r) { return (w - std::abs(r)) * sample(i + r); };
    integral += (p(t) + 4.0 * p(t + 0.5) + p(t + 1)) / 6.0;
  }
  res.integral = integral * inv_w2;
  res.gap = std::abs(res.discrete - res.integral);
  if (res.gap > 1.0 / w + 1e-12)
    throw numeric_error("kernel_average_error: gap exceeds the 1/w bound");
  return res;
}

enum class ContinuumEdge {
  Replicate,  // whole-line idealization of the interior equation
  Truncate,   // anchored boundary: kernel truncated at the chain ends
};

/// One Picard sweep of v <- int (1-|s|) f(g(v(x+s)); eps) ds on the mesh.
/// Trapezoid weights on the mesh aligned with the kernel kink at s = 0.
inline std::vector<double> continuum_apply(const SystemModel& model, const std::vector<double>& v,
                                           int mesh, double epsilon, ContinuumEdge edge) {
  const int n = static_cast<int>(v.size());
  const int m = mesh;  // kernel radius in mesh steps
  const double h = 1.0 / mesh;
  std::vector<double> u(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = model.evaluate(v[static_cast<std::size_t>(i)], epsilon);

  auto u_at = [&](int idx) {
    if (idx < 0) return edge == ContinuumEdge::Replicate ? u[0] : 0.0;
    if (idx >= n) return edge == ContinuumEdge::Replicate ? u[static_cast<std::size_t>(n - 1)] : 0.0;
    return u[static_cast<std::size_t>(idx)];
  };

  std::vector<double> kw(static_cast<std::size_t>(2 * m + 1));
  for (int k = -m; k <= m; ++k) {
    double wgt = (1.0 - std::abs(k) * h) * h;
    if (k == -m || k == m) wgt *= 0.5;  // trapezoid ends (kernel is 0 there anyway)
    kw[static_cast<std::size_t>(k + m)] = wgt;
  }

  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = -m; k <= m; ++k) s += kw[static_cast<std::size_t>(k + m)] * u_at(i + k);
    out[static_cast<std::size_t>(i)] = s;
  }
  return out;
}

namespace detail {

inline ContinuumProfile solve_continuum(const SystemModel& model, double alpha, double epsilon, int mesh,
                                        double tol, long max_iter, ContinuumEdge edge) {
  if (mesh < 16) throw parameter_error("continuum solve: mesh must be >= 16 points per unit length");
  if (tol <= 0.0) throw parameter_error("continuum solve: tol must be > 0");
  if (alpha <= 1.0)
    throw parameter_error("continuum solve: alpha <= 1 is outside the approximation's validity range");
  const double steps_real = 2.0 * alpha * mesh;
  const long steps = std::lround(steps_real);
  if (std::abs(steps_real - static_cast<double>(steps)) > 1e-9)
    throw parameter_error("continuum solve: alpha*mesh must be integral so the kernel aligns with the mesh");

  ContinuumProfile p;
  p.mesh_step = 1.0 / mesh;
  p.epsilon = epsilon;
  p.grid.resize(static_cast<std::size_t>(steps) + 1);
  for (long k = 0; k <= steps; ++k) p.grid[static_cast<std::size_t>(k)] = -alpha + static_cast<double>(k) / mesh;
  p.values.assign(p.grid.size(), std::min(1.0, model.domain().hi));

  double step = 0.0;
  long it = 0;
  for (; it < max_iter; ++it) {
    std::vector<double> nv = continuum_apply(model, p.values, mesh, epsilon, edge);
    step = 0.0;
    for (std::size_t k = 0; k < nv.size(); ++k) step = std::max(step, std::abs(nv[k] - p.values[k]));
    p.values = std::move(nv);
    if (step < tol) break;
  }
  p.iterations = it;
  p.residual = step;
  p.converged = step < tol;
  return p;
}

}  // namespace detail

/// Fixed point of the interior equation (whole-line idealization via edge
/// replication): constants solve it iff they solve the scalar equation.
inline ContinuumProfile solve_interior_fixed_point(const SystemModel& model, double alpha, double epsilon,
                                                   int mesh = 32, double tol = 1e-10,
                                                   long max_iter = 200000) {
  return detail::solve_continuum(model, alpha, epsilon, mesh, tol, max_iter, ContinuumEdge::Replicate);
}

/// Fixed point with the anchored boundary: the kernel is truncated at the
/// left edge (and by mirror symmetry at the right), which is the same as
/// extending f(g(v)) by zero beyond the ends.
inline ContinuumProfile solve_boundary_fixed_point(const SystemModel& model, double alpha, double epsilon,
                                                   int mesh = 32, double tol = 1e-10,
                                                   long max_iter = 200000) {
  return detail::solve_continuum(model, alpha, epsilon, mesh, tol, max_iter, ContinuumEdge::Truncate);
}

struct ContinuumComparison {
  double sup_gap = 0.0;       // sup_i |eps f(g(v(i/w))) - x0_i|
  double continuum_max = 0.0;
  double discrete_max = 0.0;
  int chain_length = 0;       // 2 alpha w + 1 sites
  ContinuumProfile profile;
  StateVector discrete_fixed_point;
};

/// Discrete chain of 2*alpha*w + 1 anchored sites versus the continuum
/// boundary solve at matched alpha = L/w; states are compared through
/// u(x) = f(g(v(x)); eps) sampled at the site positions x_i = i/w.
inline ContinuumComparison compare_with_discrete(const SystemModel& model, int alpha, int w, double epsilon,
                                                 int mesh = 32, double tol = 1e-10,
                                                 long max_iter = 400000) {
  if (alpha <= 1 || w < 1) throw parameter_error("compare_with_discrete: need alpha > 1, w >= 1");
  ContinuumComparison cmp;
  cmp.chain_length = 2 * alpha * w + 1;

  CoupledConfig cfg;
  cfg.L = cmp.chain_length;
  cfg.w = w;
  StateVector x(static_cast<std::size_t>(cfg.L), model.domain().hi);
  auto tr = run_coupled(model, cfg, std::move(x), epsilon, RunOptions{max_iter, tol, 0});
  cmp.discrete_fixed_point = tr.states.back();
  cmp.discrete_max = max_norm(cmp.discrete_fixed_point);

  cmp.profile = solve_boundary_fixed_point(model, alpha, epsilon, mesh, tol, max_iter);
  for (double v : cmp.profile.values) cmp.continuum_max = std::max(cmp.continuum_max, model.evaluate(v, epsilon));

  // site i (0-based) sits at continuum position (i - alpha*w)/w
  const int per_site = mesh / w;
  if (per_site * w != mesh)
    throw parameter_error("compare_with_discrete: mesh must be a multiple of w so sites land on mesh points");
  for (int i = 0; i < cfg.L; ++i) {
    const std::size_t k = static_cast<std::size_t>(i) * static_cast<std::size_t>(per_site);
    const double u = model.evaluate(cmp.profile.values[k], epsilon);
    cmp.sup_gap = std::max(cmp.sup_gap, std::abs(u - cmp.discrete_fixed_point[static_cast<std::size_t>(i)]));
  }
  return cmp;
}

}  // namespace scdyn

#endif  // SCDYN_CONTINUUM_HPP
