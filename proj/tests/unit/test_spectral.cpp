#include <cmath>
#include <numbers>

#include "bumpdirac/spectral.hpp"
#include "doctest.h"

using namespace bumpdirac;

namespace {

BumpPotential three_rectangles() {
  return BumpPotential({{1.0, BumpProfile::rectangular(1.0)},
                        {0.7, BumpProfile::rectangular(1.5)},
                        {1.3, BumpProfile::rectangular(0.8)}},
                       {2.5, 3.0, 4.0}, 0.3);
}

double free_density(double kappa) {
  const double lambda = lambda_of_kappa(kappa);
  return (lambda + 1.0) / (lambda * std::numbers::pi);
}

// int_0^b |psi|^2 for the free solution starting at (1, 0).
double free_norming(double kappa, double b) {
  const auto p = SpectralParam::from_kappa(kappa);
  const double s2 = p.ellipse_ratio() * p.ellipse_ratio();
  return b * (1.0 + s2) / 2.0 + (1.0 - s2) * std::sin(2.0 * kappa * b) / (4.0 * kappa);
}

}  // namespace

// Reference values: 40-digit integration of the same three-rectangle chain.
TEST_CASE("three-rectangle density matches the high-precision reference on both routes") {
  const auto q = three_rectangles();
  const std::pair<double, double> cases[] = {
      {0.7, 0.09228594027561863}, {-1.3, 0.15000667448598054}, {2.1, 0.499631937103696}};
  for (auto [kappa, expected] : cases) {
    const auto p = SpectralParam::from_kappa(kappa);
    CHECK(density_product(q, p) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(density_direct(q, p) == doctest::Approx(expected).epsilon(1e-9));
    DensityOptions rk4_only;
    rk4_only.closed_form_rectangles = false;
    CHECK(density_product(q, p, rk4_only) == doctest::Approx(expected).epsilon(1e-8));
  }
}

TEST_CASE("free density") {
  const BumpPotential free;
  for (double kappa : {-3.0, -0.2, 0.4, 5.0})
    CHECK(density_product(free, SpectralParam::from_kappa(kappa)) == doctest::Approx(free_density(kappa)));
  // a tilted boundary direction starts from Pruefer radius^2 = cos^2 eta + sin^2 eta / s^2
  const double eta = 1.1;
  const BumpPotential tilted({}, {}, eta);
  const auto p = SpectralParam::from_kappa(0.9);
  const double s2 = p.ellipse_ratio() * p.ellipse_ratio();
  const double r2 = std::cos(eta) * std::cos(eta) + std::sin(eta) * std::sin(eta) / s2;
  CHECK(density_direct(tilted, p) == doctest::Approx(free_density(0.9) / r2));
  CHECK(density_product(tilted, p) == doctest::Approx(free_density(0.9) / r2));
}

TEST_CASE("density profile keeps the node order for any thread count") {
  const auto q = three_rectangles();
  std::vector<double> kappas;
  for (int i = 0; i < 40; ++i) kappas.push_back(-2.0 + 0.1 * i + 0.05);
  const auto one = density_profile(q, kappas, DensityRoute::product, 1);
  const auto four = density_profile(q, kappas, DensityRoute::product, 4);
  CHECK(one.densities == four.densities);
  CHECK(one.kappas == kappas);
  for (std::size_t i = 0; i < kappas.size(); ++i)
    CHECK(one.densities[i] == doctest::Approx(density_direct(q, SpectralParam::from_kappa(kappas[i]))).epsilon(1e-9));
}

TEST_CASE("free measure") {
  const BumpPotential free;
  const auto m = measure_on_interval(free, 0.5, 3.0);
  const auto primitive = [](double k) { return (k + std::asinh(k)) / std::numbers::pi; };
  CHECK(m.value == doctest::Approx(primitive(3.0) - primitive(0.5)).epsilon(1e-10));
  // symmetric about kappa = 0 after the lambda -> -lambda map
  const auto neg = measure_on_interval(free, -3.0, -0.5);
  CHECK(neg.value == doctest::Approx(primitive(3.0) - primitive(0.5) - 2.0 * (std::asinh(3.0) - std::asinh(0.5)) /
                                                                            std::numbers::pi)
                         .epsilon(1e-10));
  CHECK_THROWS(measure_on_interval(free, 2.0, 1.0));
}

TEST_CASE("free eigenvalue count and norming integral") {
  const BumpPotential free;
  const double b = 20.0;
  // psi2(b) = 0 at kappa b = n pi
  const double l1 = 1.5, l2 = 3.0;
  const long expected =
      static_cast<long>(std::floor(kappa_of_lambda(l2) * b / std::numbers::pi)) -
      static_cast<long>(std::floor(kappa_of_lambda(l1) * b / std::numbers::pi));
  CHECK(count_eigenvalues_regular(free, b, l1, l2) == expected);
  for (double kappa : {0.6, 1.7})
    CHECK(norming_integral(free, SpectralParam::from_kappa(kappa), b) ==
          doctest::Approx(free_norming(kappa, b)).epsilon(1e-8));
  CHECK(angle_at(free, SpectralParam::from_kappa(1.7), b) == doctest::Approx(-1.7 * b));
}

TEST_CASE("regular step function of the free problem") {
  const BumpPotential free;
  const double b = 20.0;
  const auto sf = regular_step_function(free, b, 1.5, 3.0);
  CHECK(sf.unresolved.empty());
  REQUIRE(static_cast<long>(sf.steps.size()) == count_eigenvalues_regular(free, b, 1.5, 3.0));
  for (const auto& s : sf.steps) {
    const double n = s.kappa * b / std::numbers::pi;
    CHECK(std::abs(n - std::round(n)) < 1e-7);
    CHECK(s.jump == doctest::Approx(1.0 / free_norming(s.kappa, b)).epsilon(1e-7));
    CHECK(s.lambda == doctest::Approx(lambda_of_kappa(s.kappa)));
  }
}
