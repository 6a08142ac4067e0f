#include <cmath>

#include "bumpdirac/ode.hpp"
#include "bumpdirac/pruefer.hpp"
#include "doctest.h"

using namespace bumpdirac;

namespace {

void check_entries(const Matrix2& m, double a, double b, double c, double d, double tol) {
  CHECK(std::abs(m.m11 - a) < tol);
  CHECK(std::abs(m.m12 - b) < tol);
  CHECK(std::abs(m.m21 - c) < tol);
  CHECK(std::abs(m.m22 - d) < tol);
}

}  // namespace

// Reference entries: 40-digit matrix exponentials and Taylor ODE integration (tests/oracles).
TEST_CASE("closed-form rectangle matches the matrix exponential") {
  check_entries(closed_form_rectangular(0.8, 1.3, 2.2).m, 0.29271183206842434, 2.3422038126949754,
                -0.39036730211582923, 0.29271183206842434, 1e-14);
  check_entries(closed_form_rectangular(0.8, 1.3, -1.7).m, -0.98675811723514093, -0.10618397391298854,
                0.24776260579697326, -0.98675811723514093, 1e-14);
  // hyperbolic regime, |lambda - H| < 1
  check_entries(closed_form_rectangular(3.0, 0.9, 2.5).m, 1.319442135906572, 0.49696664878228892, 1.4908999463468667,
                1.319442135906572, 1e-13);
}

TEST_CASE("RK4 fundamental matrix of a smooth bump") {
  const Bump bump{1.1, BumpProfile::raised_cosine(1.4)};
  const auto t = bump_transfer(bump, 0.0, 1.9);
  check_entries(t.m, 0.71553112609863299, 3.1177654165940025, -0.15652723742030391, 0.71553112609863299, 1e-9);
  CHECK(std::abs(t.det() - 1.0) < 1e-10);
  // placement does not change the transfer matrix
  const auto shifted = bump_transfer(bump, 17.25, 1.9);
  CHECK(max_abs_difference(shifted.m, t.m) < 1e-10);
}

TEST_CASE("degenerate rectangle |lambda - H| = 1 is the polynomial limit") {
  const auto t = closed_form_rectangular(1.0, 0.7, 2.0);
  // upper = 1 + lambda - H = 2, lower = 0: M = [[1, 2 w], [0, 1]]
  check_entries(t.m, 1.0, 1.4, 0.0, 1.0, 1e-15);
}

TEST_CASE("free transfer equals a zero-height rectangle") {
  for (double lambda : {-3.0, 1.2, 4.0})
    CHECK(max_abs_difference(free_transfer(2.3, lambda).m, closed_form_rectangular(0.0, 2.3, lambda).m) < 1e-14);
}

TEST_CASE("transfer matrices compose over adjacent intervals") {
  const SystemCoefficients coeffs{[](double r) { return 0.5 + 0.3 * std::sin(r); }, 2.4, 0};
  const auto whole = integrate_fundamental(coeffs, 0.0, 3.0);
  const auto left = integrate_fundamental(coeffs, 0.0, 1.2);
  const auto right = integrate_fundamental(coeffs, 1.2, 3.0);
  CHECK(max_abs_difference(right.m * left.m, whole.m) < 1e-9);
  CHECK(std::abs(whole.det() - 1.0) < 1e-10);
}

TEST_CASE("fixed step pins the step count") {
  const SystemCoefficients coeffs{[](double) { return 0.9; }, 2.0, 0};
  StepControl fixed;
  fixed.fixed_step = 0.1;
  const auto coarse = integrate_fundamental(coeffs, 0.0, 1.0, fixed);
  const auto exact = closed_form_rectangular(0.9, 1.0, 2.0);
  const double err = max_abs_difference(coarse.m, exact.m);
  fixed.fixed_step = 0.05;
  const double err_half = max_abs_difference(integrate_fundamental(coeffs, 0.0, 1.0, fixed).m, exact.m);
  CHECK(err > 0.0);
  CHECK(err / err_half == doctest::Approx(16.0).epsilon(0.1));  // fourth order
}

TEST_CASE("channel coefficients add mass and drift") {
  SystemCoefficients coeffs{[](double) { return 0.0; }, 2.0, 2};
  const double r = 3.0;
  const double m = std::sqrt(1.0 + 4.0 / 9.0);
  const double l = 2.0 / (2.0 * (9.0 + 4.0));
  CHECK(coeffs.upper(r) == doctest::Approx(1.0 + 2.0 + (m - 1.0) - l));
  CHECK(coeffs.lower(r) == doctest::Approx(1.0 - 2.0 + (m - 1.0) + l));
}
