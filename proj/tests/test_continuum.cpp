#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracle_helpers.hpp"
#include "scdyn/continuum.hpp"
#include "scdyn/dynamics.hpp"

using namespace scdyn;

namespace {
const SystemModel& ldpc36() {
  static SystemModel m = make_ldpc_regular(3, 6);
  return m;
}
}  // namespace

TEST_CASE("triangular weights") {
  REQUIRE(triangular_weights(1) == std::vector<double>{1.0});
  REQUIRE(triangular_weights(3) == std::vector<double>{1, 2, 3, 2, 1});
  for (int w = 1; w <= 12; ++w) {
    double sum = 0.0;
    for (double a : triangular_weights(w)) sum += a;
    REQUIRE(sum == Catch::Approx(static_cast<double>(w) * w).margin(1e-12));
  }
}

TEST_CASE("kernel average: constants pass through exactly") {
  StateVector x(40, 0.37);
  auto res = kernel_average_error(x, 10, 4);
  REQUIRE(res.discrete == Catch::Approx(0.37).margin(1e-15));
  REQUIRE(res.integral == Catch::Approx(0.37).margin(1e-14));
  REQUIRE(res.gap <= 1e-14);
}

TEST_CASE("kernel average: linear ramps cancel by kernel symmetry") {
  const int L = 50;
  StateVector x(L);
  for (int i = 0; i < L; ++i) x[i] = static_cast<double>(i) / L;
  for (int i : {8, 20, 41}) {
    auto res = kernel_average_error(x, i, 8);
    REQUIRE(res.gap <= 1e-14);
  }
}

TEST_CASE("kernel average error obeys the 1/w bound on random states") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ux(0.0, 1.0);
  for (int w : {2, 4, 8}) {
    for (int trial = 0; trial < 1000; ++trial) {
      StateVector x(64);
      for (auto& v : x) v = ux(rng);
      const int i = w - 1 + static_cast<int>(rng() % static_cast<unsigned long>(64 - 2 * w + 2));
      auto res = kernel_average_error(x, i, w);  // throws if the bound fails
      REQUIRE(res.gap <= 1.0 / w + 1e-12);
    }
  }
}

TEST_CASE("kernel average rejects out-of-range indices") {
  StateVector x(20, 0.5);
  REQUIRE_THROWS_AS(kernel_average_error(x, 2, 4), parameter_error);
  REQUIRE_THROWS_AS(kernel_average_error(x, 17, 4), parameter_error);
}

TEST_CASE("interior equation: below the single threshold the profile dies") {
  auto prof = solve_interior_fixed_point(ldpc36(), 4, 0.40, 32, 1e-10);
  REQUIRE(prof.converged);
  REQUIRE(max_norm(prof.values) <= 1e-8);
}

TEST_CASE("interior equation: constants solve it iff the scalar equation holds") {
  const double eps = 0.47;
  const double xs = oracle::iterate_map(
      [&](double x) { return eps * oracle::ldpc_composite(3, 6, x); }, 1.0, 200000);

  // fixed constant: one sweep keeps it (kernel mass is exactly 1)
  std::vector<double> v(2 * 4 * 32 + 1, xs);
  auto next = continuum_apply(ldpc36(), v, 32, eps, ContinuumEdge::Replicate);
  for (std::size_t k = 0; k < v.size(); ++k) REQUIRE(std::abs(next[k] - xs) <= 1e-8);

  // non-fixed constant: the sweep moves it by the scalar defect
  std::vector<double> u(v.size(), 0.8);
  auto moved = continuum_apply(ldpc36(), u, 32, eps, ContinuumEdge::Replicate);
  REQUIRE(std::abs(moved[moved.size() / 2] - 0.8) > 1e-3);

  // and the Picard limit from all-ones is that scalar fixed point
  auto prof = solve_interior_fixed_point(ldpc36(), 4, eps, 32, 1e-11);
  REQUIRE(prof.converged);
  for (double val : prof.values) REQUIRE(val == Catch::Approx(xs).margin(1e-6));
}

TEST_CASE("Picard iterates from all-ones are pointwise nonincreasing") {
  std::vector<double> v(2 * 3 * 32 + 1, 1.0);
  for (int sweep = 0; sweep < 50; ++sweep) {
    auto nv = continuum_apply(ldpc36(), v, 32, 0.46, ContinuumEdge::Truncate);
    for (std::size_t k = 0; k < v.size(); ++k) REQUIRE(nv[k] <= v[k] + 1e-15);
    v = std::move(nv);
  }
}

TEST_CASE("boundary equation: zero is a fixed point and the edge halves the drive") {
  const int mesh = 32;
  std::vector<double> zero(2 * 4 * mesh + 1, 0.0);
  auto z = continuum_apply(ldpc36(), zero, mesh, 0.47, ContinuumEdge::Truncate);
  for (double val : z) REQUIRE(val == 0.0);

  // truncated mass at the left end: 1/2 + h/2 on the aligned trapezoid mesh
  std::vector<double> c(2 * 4 * mesh + 1, 0.5);
  auto y = continuum_apply(ldpc36(), c, mesh, 0.47, ContinuumEdge::Truncate);
  const double drive = ldpc36().evaluate(0.5, 0.47);
  const double h = 1.0 / mesh;
  REQUIRE(y.front() == Catch::Approx(drive * (0.5 + 0.5 * h)).margin(1e-12));
  REQUIRE(std::abs(y.front() / drive - 0.5) <= h);
  REQUIRE(y[y.size() / 2] == Catch::Approx(drive).margin(1e-12));
}

TEST_CASE("anchoring suppresses the boundary-equation profile below the interior one") {
  auto vb = solve_boundary_fixed_point(ldpc36(), 4, 0.47, 32, 1e-10);
  auto vi = solve_interior_fixed_point(ldpc36(), 4, 0.47, 32, 1e-10);
  REQUIRE(vb.converged);
  REQUIRE(vi.converged);
  for (std::size_t k = 0; k < vb.values.size(); ++k) REQUIRE(vb.values[k] <= vi.values[k] + 1e-12);
}

TEST_CASE("parameter validation") {
  REQUIRE_THROWS_AS(solve_interior_fixed_point(ldpc36(), 4, 0.4, 8), parameter_error);
  REQUIRE_THROWS_AS(solve_interior_fixed_point(ldpc36(), 0.8, 0.4, 32), parameter_error);
  REQUIRE_THROWS_AS(solve_interior_fixed_point(ldpc36(), 4.0001, 0.4, 32), parameter_error);
}

TEST_CASE("non-convergence returns a flagged partial profile") {
  auto prof = detail::solve_continuum(ldpc36(), 4, 0.47, 32, 1e-10, 3, ContinuumEdge::Truncate);
  REQUIRE_FALSE(prof.converged);
  REQUIRE(prof.iterations == 3);
  REQUIRE(prof.residual > 0.0);
}

TEST_CASE("continuum front tracks the discrete stall fixed point, tighter as w grows") {
  auto c4 = compare_with_discrete(ldpc36(), 4, 4, 0.47, 32, 1e-11);
  auto c8 = compare_with_discrete(ldpc36(), 4, 8, 0.47, 32, 1e-11);
  REQUIRE(c4.discrete_max > 0.3);  // genuinely nonzero stall profiles
  REQUIRE(c8.discrete_max > 0.3);
  REQUIRE(c4.sup_gap == Catch::Approx(0.0474).margin(0.02));
  REQUIRE(c8.sup_gap == Catch::Approx(0.0187).margin(0.01));
  REQUIRE(c8.sup_gap < c4.sup_gap);
  REQUIRE(c4.sup_gap <= 2.0 / 4);
  REQUIRE(c8.sup_gap <= 2.0 / 8);
}
