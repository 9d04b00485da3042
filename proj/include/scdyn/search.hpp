#ifndef SCDYN_SEARCH_HPP
#define SCDYN_SEARCH_HPP

#include <cmath>
#include <utility>

#include "scdyn/errors.hpp"

namespace scdyn {

struct MinResult {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section minimization on [a, b]; stops when the bracket is below xtol.
template <typename F>
MinResult golden_section_min(F&& f, double a, double b, double xtol, int max_iter = 200) {
  static const double gr = (std::sqrt(5.0) - 1.0) / 2.0;  // 0.618...
  int evals = 0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  evals += 2;
  for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm), evals + 1};
}

struct BracketResult {
  double lo = 0.0;
  double hi = 0.0;
  int evaluations = 0;
};

/// Bisection on a monotone predicate: pred(lo) is expected true, pred(hi) false.
/// Returns the final bracket [lo, hi] with hi - lo <= tol.
template <typename Pred>
BracketResult bisect_predicate(Pred&& pred, double lo, double hi, double tol, int max_iter = 200) {
  if (tol <= 0.0) throw parameter_error("bisect_predicate: tol must be > 0");
  int evals = 0;
  for (int it = 0; it < max_iter && (hi - lo) > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid))
      lo = mid;
    else
      hi = mid;
    ++evals;
  }
  return {lo, hi, evals};
}

/// Bisection for a root of f with f(a) and f(b) of opposite sign.
template <typename F>
double bisect_root(F&& f, double a, double b, double xtol, int max_iter = 200) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) throw parameter_error("bisect_root: no sign change on bracket");
  for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace scdyn

#endif  // SCDYN_SEARCH_HPP
