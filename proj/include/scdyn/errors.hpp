#ifndef SCDYN_ERRORS_HPP
#define SCDYN_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace scdyn {

/// Invalid model construction (bad degrees, non-monotone map where required, ...).
class model_error : public std::invalid_argument {
 public:
  explicit model_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Invalid operation parameter (tolerances, grid sizes, index ranges, ...).
class parameter_error : public std::invalid_argument {
 public:
  explicit parameter_error(const std::string& what) : std::invalid_argument(what) {}
};

/// State-vector length mismatch.
class shape_error : public std::invalid_argument {
 public:
  explicit shape_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Numeric failure at runtime (NaN from user maps, divergent iterations, ...).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Fixed-point search ran out of iterations; carries the partial result.
class nonconvergence_error : public numeric_error {
 public:
  nonconvergence_error(const std::string& what, std::vector<double> state, double residual)
      : numeric_error(what), last_state(std::move(state)), residual(residual) {}

  std::vector<double> last_state;
  double residual;
};

}  // namespace scdyn

#endif  // SCDYN_ERRORS_HPP
