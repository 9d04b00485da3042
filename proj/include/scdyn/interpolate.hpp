#ifndef SCDYN_INTERPOLATE_HPP
#define SCDYN_INTERPOLATE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "scdyn/errors.hpp"

namespace scdyn {

/// Monotone piecewise-cubic interpolant (Fritsch-Carlson slope limiting).
/// Monotone input data yields a monotone interpolant with no overshoot,
/// which is what table-loaded update maps need.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;

  MonotoneCubic(std::vector<double> xs, std::vector<double> ys)
      : x_(std::move(xs)), y_(std::move(ys)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw parameter_error("MonotoneCubic: need >= 2 matching samples");
    for (std::size_t i = 1; i < n; ++i)
      if (!(x_[i] > x_[i - 1])) throw parameter_error("MonotoneCubic: x samples must increase");

    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);

    m_.assign(n, 0.0);
    m_[0] = delta[0];
    m_[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        m_[i] = 0.0;  // local extremum in the data
      } else {
        // weighted harmonic mean of neighboring secants
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        const double w1 = 2.0 * h1 + h0;
        const double w2 = h1 + 2.0 * h0;
        m_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    // clamp endpoint slopes so the first/last segments stay monotone
    for (std::size_t i : {std::size_t{0}, n - 1}) {
      const double d = (i == 0) ? delta[0] : delta[n - 2];
      if (d == 0.0)
        m_[i] = 0.0;
      else if (m_[i] / d < 0.0)
        m_[i] = 0.0;
      else if (std::abs(m_[i]) > 3.0 * std::abs(d))
        m_[i] = 3.0 * d;
    }
  }

  double operator()(double x) const {
    const auto [i, t, h] = locate(x);
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
  }

  double derivative(double x) const {
    const auto [i, t, h] = locate(x);
    const double t2 = t * t;
    const double d00 = (6 * t2 - 6 * t) / h;
    const double d10 = 3 * t2 - 4 * t + 1;
    const double d01 = (-6 * t2 + 6 * t) / h;
    const double d11 = 3 * t2 - 2 * t;
    return d00 * y_[i] + d10 * m_[i] + d01 * y_[i + 1] + d11 * m_[i + 1];
  }

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  struct Loc {
    std::size_t i;
    double t;
    double h;
  };

  Loc locate(double x) const {
    x = std::clamp(x, x_.front(), x_.back());
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = (it == x_.begin()) ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    if (i + 1 >= x_.size()) i = x_.size() - 2;
    const double h = x_[i + 1] - x_[i];
    return {i, (x - x_[i]) / h, h};
  }

  std::vector<double> x_, y_, m_;
};

}  // namespace scdyn

#endif  // SCDYN_INTERPOLATE_HPP
