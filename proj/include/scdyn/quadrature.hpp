#ifndef SCDYN_QUADRATURE_HPP
#define SCDYN_QUADRATURE_HPP

#include <cstddef>
#include <vector>

#include "scdyn/errors.hpp"

namespace scdyn {

/// Composite Simpson rule with `panels` panels on [a, b].
/// Fixed panel count keeps results bit-reproducible across runs.
template <typename F>
double composite_simpson(F&& f, double a, double b, int panels) {
  if (panels < 2) throw parameter_error("composite_simpson: panels must be >= 2");
  if (a == b) return 0.0;
  const double h = (b - a) / panels;
  double odd = 0.0, even = 0.0;
  for (int k = 1; k < panels; k += 2) odd += f(a + k * h);
  for (int k = 2; k < panels; k += 2) even += f(a + k * h);
  return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

/// Antiderivative samples F(x_k) = int_a^{x_k} f, x_k = a + k*(b-a)/n, k = 0..n.
/// Each grid segment is integrated with a 2-panel Simpson rule and accumulated,
/// so the whole table costs one sweep of the grid.
template <typename F>
std::vector<double> cumulative_simpson(F&& f, double a, double b, int n) {
  if (n < 1) throw parameter_error("cumulative_simpson: need at least one segment");
  std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
  const double h = (b - a) / n;
  double acc = 0.0;
  double f_lo = f(a);
  for (int k = 0; k < n; ++k) {
    const double lo = a + k * h;
    const double hi = lo + h;
    const double f_hi = f(hi);
    acc += h / 6.0 * (f_lo + 4.0 * f(lo + 0.5 * h) + f_hi);
    out[static_cast<std::size_t>(k) + 1] = acc;
    f_lo = f_hi;
  }
  return out;
}

/// Composite trapezoid rule on [a, b] with `panels` panels.
template <typename F>
double composite_trapezoid(F&& f, double a, double b, int panels) {
  if (panels < 1) throw parameter_error("composite_trapezoid: panels must be >= 1");
  if (a == b) return 0.0;
  const double h = (b - a) / panels;
  double s = 0.5 * (f(a) + f(b));
  for (int k = 1; k < panels; ++k) s += f(a + k * h);
  return h * s;
}

}  // namespace scdyn

#endif  // SCDYN_QUADRATURE_HPP
