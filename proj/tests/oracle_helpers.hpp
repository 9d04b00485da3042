#ifndef SCDYN_TESTS_ORACLE_HELPERS_HPP
#define SCDYN_TESTS_ORACLE_HELPERS_HPP

// Test-side oracles, deliberately independent of the library's own code
// paths: plain std::pow arithmetic, direct iteration, brute-force scans.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

/// (3,6)-style composite DE map written directly with std::pow.
inline double ldpc_composite(int l, int r, double x) {
  return std::pow(1.0 - std::pow(1.0 - x, r - 1), l - 1);
}

/// Direct iteration of x -> step(x); returns the value after at most
/// max_iter steps or when successive values differ below tol.
inline double iterate_map(const std::function<double(double)>& step, double x0, long max_iter,
                          double tol = 1e-14) {
  double x = x0;
  for (long it = 0; it < max_iter; ++it) {
    const double nx = step(x);
    if (std::abs(nx - x) < tol) return nx;
    x = nx;
  }
  return x;
}

/// Plain bisection for a root of f on [a, b] (sign change assumed).
inline double bisect(const std::function<double(double)>& f, double a, double b, double xtol = 1e-14) {
  double fa = f(a);
  for (int it = 0; it < 200 && (b - a) > xtol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// Central finite difference.
inline double central_diff(const std::function<double(double)>& f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Second difference convexity probe: f(x-h) + f(x+h) - 2 f(x).
inline double second_diff(const std::function<double(double)>& f, double x, double h) {
  return f(x - h) + f(x + h) - 2.0 * f(x);
}

/// Explicit-loop step of the anchored InsideAverage chain (Eq-level oracle,
/// no shared code with scdyn::coupled_step).
inline std::vector<double> inside_step_explicit(const std::vector<double>& x, int w, double eps, int l,
                                                int r) {
  const int L = static_cast<int>(x.size());
  std::vector<double> out(L);
  auto get = [&](int m) { return (m < 0 || m >= L) ? 0.0 : x[m]; };
  for (int i = 0; i < L; ++i) {
    double acc = 0.0;
    for (int k = 0; k < w; ++k)
      for (int j = 0; j < w; ++j) acc += get(i + j - k);
    out[i] = eps * ldpc_composite(l, r, acc / (static_cast<double>(w) * w));
  }
  return out;
}

}  // namespace oracle

#endif  // SCDYN_TESTS_ORACLE_HELPERS_HPP
