#ifndef SCDYN_SYSTEM_MODEL_HPP
#define SCDYN_SYSTEM_MODEL_HPP

#include <cassert>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "scdyn/errors.hpp"
#include "scdyn/interpolate.hpp"

namespace scdyn {

using ScalarFn = std::function<double(double)>;
using BiFn = std::function<double(double, double)>;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
  bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
  double width() const { return hi - lo; }
};

enum class EpsilonMode { Multiplicative, Generic };

/// x^n for small integer n; much cheaper than std::pow in the iteration loops.
inline double int_pow(double x, int n) {
  double r = 1.0;
  for (; n > 0; n >>= 1, x *= x)
    if (n & 1) r *= x;
  return r;
}

namespace detail {

/// Central finite difference with one-sided fallback near the domain edges.
inline ScalarFn fd_derivative(ScalarFn fn, Interval dom, double step = 1e-5) {
  return [fn = std::move(fn), dom, step](double x) {
    double a = x - step, b = x + step;
    if (a < dom.lo) a = x;
    if (b > dom.hi) b = x;
    if (a == b) return 0.0;
    return (fn(b) - fn(a)) / (b - a);
  };
}

}  // namespace detail

/// The pair (f, g) with derivatives and the epsilon parameterization.
///
/// Multiplicative mode: one update step is x -> eps * f(g(x)).
/// Generic mode:        one update step is x -> f(g(x); eps), with f supplied
///                      as a two-argument map (used by the cancelation system,
///                      where eps plays the role of the load alpha).
///
/// Immutable after construction; safe to evaluate concurrently.
class SystemModel {
 public:
  static SystemModel multiplicative(std::string name, ScalarFn f, ScalarFn g, ScalarFn f_prime = {},
                                    ScalarFn g_prime = {}, Interval domain = {}, bool catalog = false) {
    SystemModel m;
    m.name_ = std::move(name);
    m.mode_ = EpsilonMode::Multiplicative;
    m.domain_ = domain;
    m.f_ = std::move(f);
    m.g_ = std::move(g);
    m.f_prime_ = f_prime ? std::move(f_prime) : detail::fd_derivative(m.f_, domain);
    m.g_prime_ = g_prime ? std::move(g_prime) : detail::fd_derivative(m.g_, domain);
    m.catalog_ = catalog;
    m.validate();
    return m;
  }

  static SystemModel generic(std::string name, BiFn f2, ScalarFn g, BiFn f2_prime = {},
                             ScalarFn g_prime = {}, Interval domain = {}, bool catalog = false,
                             double probe_epsilon = 1.0) {
    SystemModel m;
    m.name_ = std::move(name);
    m.mode_ = EpsilonMode::Generic;
    m.domain_ = domain;
    m.f2_ = std::move(f2);
    m.g_ = std::move(g);
    if (f2_prime) {
      m.f2_prime_ = std::move(f2_prime);
    } else {
      m.f2_prime_ = [f2 = m.f2_, domain](double y, double e) {
        return detail::fd_derivative([&](double z) { return f2(z, e); }, domain)(y);
      };
    }
    m.g_prime_ = g_prime ? std::move(g_prime) : detail::fd_derivative(m.g_, domain);
    m.catalog_ = catalog;
    m.probe_epsilon_ = probe_epsilon;
    m.validate();
    return m;
  }

  const std::string& name() const { return name_; }
  EpsilonMode mode() const { return mode_; }
  const Interval& domain() const { return domain_; }
  bool is_catalog() const { return catalog_; }
  /// Sampled nondecreasing-ness of the update map (recorded, enforced only
  /// where construction demands it; cancelation g may legitimately decrease).
  bool monotone() const { return monotone_; }

  /// Node map without the channel parameter (Multiplicative mode only).
  double f(double y) const {
    if (mode_ != EpsilonMode::Multiplicative) throw model_error(name_ + ": f(y) needs Multiplicative mode");
    return f_(y);
  }

  /// Node map including the channel parameter.
  double f(double y, double eps) const {
    return mode_ == EpsilonMode::Multiplicative ? eps * f_(y) : f2_(y, eps);
  }

  double f_prime(double y) const {
    if (mode_ != EpsilonMode::Multiplicative) throw model_error(name_ + ": f_prime(y) needs Multiplicative mode");
    return f_prime_(y);
  }

  /// d/dy of f(y; eps).
  double f_prime(double y, double eps) const {
    return mode_ == EpsilonMode::Multiplicative ? eps * f_prime_(y) : f2_prime_(y, eps);
  }

  double g(double x) const { return g_(x); }
  double g_prime(double x) const { return g_prime_(x); }

  /// f(g(x)) without eps (Multiplicative mode).
  double composite(double x) const { return f(g_(x)); }
  /// d/dx of composite.
  double composite_prime(double x) const { return f_prime(g_(x)) * g_prime_(x); }

  /// One application of the update map; the result is clamped to the domain.
  /// Clamping is a no-op for catalog models (asserted in debug builds).
  double evaluate(double x, double eps) const {
    check_inputs(x, eps);
    const double v = f(g_(x), eps);
    if (std::isnan(v)) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%s: NaN from update map at x=%.17g, eps=%.17g", name_.c_str(), x, eps);
      throw numeric_error(buf);
    }
    const double c = domain_.clamp(v);
#ifndef NDEBUG
    if (catalog_) assert(std::abs(c - v) <= 1e-12 && "clamping must be a no-op for catalog models");
#endif
    return c;
  }

  /// d/dx of the update map at x: f'(g(x); eps) * g'(x).
  double update_slope(double x, double eps) const { return f_prime(g_(x), eps) * g_prime_(x); }

  /// Regular LDPC degrees when this model came from make_ldpc_regular.
  const std::optional<std::pair<int, int>>& ldpc_degrees() const { return ldpc_; }
  /// Noise variance when this model came from make_cancelation.
  const std::optional<double>& cancelation_sigma2() const { return sigma2_; }

 private:
  friend SystemModel make_ldpc_regular(int l, int r);
  friend SystemModel make_cancelation(ScalarFn g, double sigma2, double alpha, ScalarFn g_prime);

  void check_inputs(double x, double eps) const {
    if (!domain_.contains(x, 1e-12))
      throw parameter_error(name_ + ": x outside model domain");
    if (mode_ == EpsilonMode::Multiplicative) {
      if (eps < 0.0 || eps > 1.0) throw parameter_error(name_ + ": eps must lie in [0,1]");
    } else if (eps < 0.0) {
      throw parameter_error(name_ + ": alpha must be >= 0");
    }
  }

  void validate() {
    constexpr int kGrid = 1000;
    const double probe = mode_ == EpsilonMode::Multiplicative ? 1.0 : probe_epsilon_;
    monotone_ = true;
    double prev = f(g_(domain_.lo), probe);
    if (std::isnan(prev)) throw model_error(name_ + ": update map returns NaN at domain start");
    for (int k = 1; k <= kGrid; ++k) {
      const double x = domain_.lo + domain_.width() * k / kGrid;
      const double v = f(g_(x), probe);
      if (std::isnan(v)) throw model_error(name_ + ": update map returns NaN on domain grid");
      if (v < prev - 1e-12) monotone_ = false;
      prev = v;
    }
    if (mode_ == EpsilonMode::Multiplicative) {
      if (!monotone_) throw model_error(name_ + ": f(g(x)) must be nondecreasing on the domain");
      if (std::abs(f_(g_(domain_.lo))) > 1e-9)
        throw model_error(name_ + ": f(g(0)) must vanish (zero must be a fixed point)");
    }
  }

  std::string name_;
  EpsilonMode mode_ = EpsilonMode::Multiplicative;
  Interval domain_;
  ScalarFn f_;          // Multiplicative node map
  BiFn f2_;             // Generic node map f(y; eps)
  ScalarFn f_prime_;
  BiFn f2_prime_;
  ScalarFn g_;
  ScalarFn g_prime_;
  bool catalog_ = false;
  bool monotone_ = true;
  double probe_epsilon_ = 1.0;
  std::optional<std::pair<int, int>> ldpc_;
  std::optional<double> sigma2_;
};

/// Regular (l, r) LDPC ensemble over the BEC, in decomposed form:
/// g(x) = 1 - (1-x)^{r-1} (check map), f(y) = y^{l-1} (variable map),
/// so that one update is eps * [1 - (1-x)^{r-1}]^{l-1}.
inline SystemModel make_ldpc_regular(int l, int r) {
  if (l < 2 || r < 2) throw model_error("make_ldpc_regular: degrees must be >= 2");
  char nm[32];
  std::snprintf(nm, sizeof nm, "ldpc(%d,%d)", l, r);
  auto m = SystemModel::multiplicative(
      nm,
      [l](double y) { return int_pow(y, l - 1); },
      [r](double x) { return 1.0 - int_pow(1.0 - x, r - 1); },
      [l](double y) { return (l - 1) * int_pow(y, l - 2); },
      [r](double x) { return (r - 1) * int_pow(1.0 - x, r - 2); },
      Interval{0.0, 1.0}, /*catalog=*/true);
  m.ldpc_ = std::make_pair(l, r);
  return m;
}

/// Iterative interference cancelation system x -> alpha * g(x) + sigma2.
/// Generic mode; eps plays the role of alpha. The domain upper bound is grown
/// until the map is self-contained (or the growth fails to settle).
inline SystemModel make_cancelation(ScalarFn g, double sigma2, double alpha, ScalarFn g_prime = {}) {
  if (sigma2 < 0.0) throw model_error("make_cancelation: sigma2 must be >= 0");
  if (alpha < 0.0) throw model_error("make_cancelation: alpha must be >= 0");
  if (!g) throw model_error("make_cancelation: g is required");

  auto sup_g = [&g](double hi) {
    double s = 0.0;
    for (int k = 0; k <= 2000; ++k) {
      const double v = g(hi * k / 2000.0);
      if (std::isnan(v) || std::isinf(v)) throw model_error("make_cancelation: g not finite on domain");
      if (v < 0.0) throw model_error("make_cancelation: g must be nonnegative");
      s = std::max(s, v);
    }
    return s;
  };

  double x_max = 1.0;
  for (int round = 0; round < 8; ++round) {
    const double reach = alpha * sup_g(x_max) + sigma2;
    if (reach <= x_max) break;
    if (round == 7) throw model_error("make_cancelation: g appears unbounded (domain did not settle)");
    x_max = reach * 1.05;
  }

  char nm[64];
  std::snprintf(nm, sizeof nm, "cancel(sigma2=%g,alpha=%g)", sigma2, alpha);
  auto m = SystemModel::generic(
      nm,
      [sigma2](double y, double a) { return a * y + sigma2; },
      std::move(g),
      [](double, double a) { return a; },
      std::move(g_prime), Interval{0.0, x_max}, /*catalog=*/true, alpha);
  m.sigma2_ = sigma2;
  return m;
}

namespace detail {

struct Table {
  std::string name;
  std::vector<double> xs, ys;
};

inline Table read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parameter_error("cannot open table file: " + path);
  Table t;
  if (!std::getline(in, t.name)) throw parameter_error("empty table file: " + path);
  double x, y;
  while (in >> x >> y) {
    t.xs.push_back(x);
    t.ys.push_back(y);
  }
  if (t.xs.size() < 4) throw parameter_error("table needs at least 4 samples: " + path);
  const double h = t.xs[1] - t.xs[0];
  for (std::size_t i = 1; i < t.xs.size(); ++i) {
    const double d = t.xs[i] - t.xs[i - 1];
    if (std::abs(d - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw parameter_error("table grid must be uniform: " + path);
    if (t.ys[i] < t.ys[i - 1] - 1e-12)
      throw model_error("table values must be nondecreasing: " + path);
  }
  return t;
}

}  // namespace detail

/// User model from two plain-text tables (header line names the model, then
/// "x value" rows on a uniform grid), one file for f and one for g, both
/// interpolated with the monotone piecewise cubic.
inline SystemModel load_table_model(const std::string& f_path, const std::string& g_path) {
  auto ft = detail::read_table(f_path);
  auto gt = detail::read_table(g_path);
  MonotoneCubic fi(ft.xs, ft.ys), gi(gt.xs, gt.ys);
  Interval dom{gt.xs.front(), gt.xs.back()};
  return SystemModel::multiplicative(
      ft.name.empty() ? "table" : ft.name,
      [fi](double y) { return fi(y); },
      [gi](double x) { return gi(x); },
      [fi](double y) { return fi.derivative(y); },
      [gi](double x) { return gi.derivative(x); },
      dom, /*catalog=*/false);
}

}  // namespace scdyn

#endif  // SCDYN_SYSTEM_MODEL_HPP
