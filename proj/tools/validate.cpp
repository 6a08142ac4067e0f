#include "validate.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "bumpdirac/angular.hpp"
#include "bumpdirac/coefficients.hpp"
#include "bumpdirac/ode.hpp"
#include "bumpdirac/pruefer.hpp"
#include "bumpdirac/spectral.hpp"

namespace bumpdirac::cli {

namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  bool coin() { return uniform(0.0, 1.0) < 0.5; }
  double signed_range(double lo, double hi) { return (coin() ? 1.0 : -1.0) * uniform(lo, hi); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  // lambda in +-[1.1, 5] away from the two degenerate values H +- 1.
  double lambda_avoiding(double height) {
    for (;;) {
      const double lambda = signed_range(1.1, 5.0);
      if (std::abs(lambda - height - 1.0) > 0.05 && std::abs(lambda - height + 1.0) > 0.05) return lambda;
    }
  }

  BumpProfile profile(double width) {
    switch (integer(0, 3)) {
      case 0:
        return BumpProfile::rectangular(width);
      case 1:
        return BumpProfile::raised_cosine(width);
      case 2:
        return BumpProfile::triangular(width);
      default: {
        std::vector<double> samples(static_cast<std::size_t>(integer(3, 12)));
        for (auto& s : samples) s = uniform(0.1, 2.0);
        return normalize_profile(samples, width);
      }
    }
  }

 private:
  std::mt19937_64 engine_;
};

InvariantCheck check(std::string name, double limit, std::size_t samples, const std::function<double(Draw&)>& trial,
                     Draw& draw, bool strict = false) {
  InvariantCheck c{std::move(name), true, 0.0, limit, samples};
  for (std::size_t i = 0; i < samples; ++i) c.worst = std::max(c.worst, trial(draw));
  c.passed = strict ? c.worst < limit : c.worst <= limit;
  return c;
}

}  // namespace

std::vector<InvariantCheck> run_invariant_suite(std::size_t n, std::uint64_t seed) {
  Draw draw(seed);
  std::vector<InvariantCheck> out;

  out.push_back(check("spectral parameter round trip", 1e-14, n, [](Draw& d) {
    const double lambda = d.signed_range(1.0001, 50.0);
    return std::abs(lambda_of_kappa(kappa_of_lambda(lambda)) - lambda) / std::abs(lambda);
  }, draw));

  out.push_back(check("transfer determinant", 1e-10, n, [](Draw& d) {
    const double width = d.uniform(0.2, 2.0);
    const Bump bump{d.uniform(0.0, 2.0), d.profile(width)};
    const auto t = bump_transfer(bump, 0.0, d.lambda_avoiding(bump.height / width));
    return std::abs(t.det() - 1.0);
  }, draw));

  out.push_back(check("closed-form transfer vs RK4", 1e-9, n, [](Draw& d) {
    const double height = d.uniform(0.0, 2.0);
    const double width = d.uniform(0.2, 2.0);
    const double lambda = d.lambda_avoiding(height);
    const SystemCoefficients coeffs{[height](double) { return height; }, lambda, 0};
    return max_abs_difference(integrate_fundamental(coeffs, 0.0, width).m,
                              closed_form_rectangular(height, width, lambda).m);
  }, draw));

  out.push_back(check("A^2 - B^2 - C^2 = 1", 1e-9, n, [](Draw& d) {
    const double width = d.uniform(0.2, 2.0);
    const Bump bump{d.uniform(0.0, 2.0), d.profile(width)};
    const auto param = SpectralParam::from_lambda(d.lambda_avoiding(bump.height / width));
    const auto c = abc_from_transfer(bump_transfer(bump, 0.0, param.lambda()), param);
    return std::abs(c.mean * c.mean - c.cos_part * c.cos_part - c.sin_part * c.sin_part - 1.0);
  }, draw));

  out.push_back(check("period averages of f and log f", 1e-9, n, [](Draw& d) {
    const double width = d.uniform(0.2, 2.0);
    const Bump bump{d.uniform(0.0, 2.0), d.profile(width)};
    const auto param = SpectralParam::from_lambda(d.lambda_avoiding(bump.height / width));
    const auto c = abc_from_transfer(bump_transfer(bump, 0.0, param.lambda()), param);
    const auto avg = period_averages(c);
    return std::max(std::abs(avg.factor - 1.0), std::abs(avg.log_factor - mean_log_factor(c)));
  }, draw));

  out.push_back(check("Pruefer round trip", 1e-12, n, [](Draw& d) {
    const auto param = SpectralParam::from_lambda(d.signed_range(1.01, 10.0));
    const Vec2 psi{d.uniform(-3.0, 3.0), d.uniform(-3.0, 3.0)};
    const auto p = to_pruefer(psi, param);
    const Vec2 back = from_pruefer(p.radius, p.angle, param);
    const double r2 = psi[0] * psi[0] + psi[1] * psi[1] / (param.ellipse_ratio() * param.ellipse_ratio());
    return std::max({std::abs(back[0] - psi[0]), std::abs(back[1] - psi[1]),
                     std::abs(p.radius * p.radius - r2) / r2});
  }, draw));

  out.push_back(check("profile normalization", 1e-10, n, [](Draw& d) {
    return std::abs(d.profile(d.uniform(0.2, 2.0)).mass() - 1.0);
  }, draw));

  out.push_back(check("density product vs direct", 1e-8, n, [](Draw& d) {
    std::vector<Bump> bumps;
    std::vector<double> distances;
    for (int j = 0; j < 3; ++j) {
      const double width = d.uniform(0.2, 2.0);
      bumps.push_back({d.uniform(0.0, 2.0), d.profile(width)});
      distances.push_back(d.uniform(0.5, 10.0));
    }
    const BumpPotential q(bumps, distances, d.uniform(0.0, std::numbers::pi));
    const auto param = SpectralParam::from_kappa(d.signed_range(0.5, 3.0));
    const double direct = density_direct(q, param);
    return std::abs(density_product(q, param) - direct) / direct;
  }, draw));

  out.push_back(check("channel transform orthogonality", 1e-12, n, [](Draw& d) {
    int k = d.integer(1, 5) * (d.coin() ? 1 : -1);
    const Matrix2 a = transform_matrix(k, d.uniform(0.01, 20.0));
    return max_abs_difference(a.transposed() * a, Matrix2::identity());
  }, draw));

  out.push_back(check("mass and drift decay ratios", 1.0, n, [](Draw& d) {
    const int k = d.integer(1, 5) * (d.coin() ? 1 : -1);
    const double r = d.uniform(1.0, 50.0);
    const auto md = mass_drift(k, r);
    const double kk = static_cast<double>(k) * k;
    return std::max((md.mass - 1.0) * r * r / kk, std::abs(md.drift) * 2.0 * r * r / std::abs(k));
  }, draw, true));

  out.push_back(check("channel term bounds", 1.0, n, [](Draw& d) {
    const int k = d.integer(1, 4) * (d.coin() ? 1 : -1);
    const auto param = SpectralParam::from_kappa(d.signed_range(0.3, 4.0));
    const double r = d.uniform(1.0, 30.0);
    const auto terms = channel_terms(k, param, r, d.uniform(0.0, std::numbers::pi));
    const auto bounds = channel_constants(k, param);
    return std::max(std::abs(terms.radial) * r * r / bounds.radial, std::abs(terms.angular) * r * r / bounds.angular);
  }, draw, true));

  out.push_back(check("Bessel pair Wronskian constancy", 1e-8, n, [](Draw& d) {
    const int k = d.integer(1, 3) * (d.coin() ? 1 : -1);
    const auto param = SpectralParam::from_kappa(d.signed_range(0.5, 3.0));
    auto wronskian = [&](double r) {
      const auto s = free_solutions(k, param, r);
      return s.regular[0] * s.singular[1] - s.regular[1] * s.singular[0];
    };
    const double w0 = wronskian(1.0);
    return std::abs(wronskian(d.uniform(0.1, 10.0)) - w0) / std::abs(w0);
  }, draw));

  return out;
}

}  // namespace bumpdirac::cli
