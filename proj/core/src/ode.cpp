#include "bumpdirac/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bumpdirac/angular.hpp"
#include "bumpdirac/errors.hpp"

namespace bumpdirac {

double SystemCoefficients::upper(double r) const {
  const double q = potential ? potential(r) : 0.0;
  double value = -q + 1.0 + lambda;
  if (channel != 0) {
    const auto md = mass_drift(channel, r);
    value += (md.mass - 1.0) - md.drift;
  }
  return value;
}

double SystemCoefficients::lower(double r) const {
  const double q = potential ? potential(r) : 0.0;
  double value = q + 1.0 - lambda;
  if (channel != 0) {
    const auto md = mass_drift(channel, r);
    value += (md.mass - 1.0) + md.drift;
  }
  return value;
}

namespace {

struct CoefficientPair {
  double upper;
  double lower;
};

CoefficientPair sample(const SystemCoefficients& c, double r) {
  const CoefficientPair p{c.upper(r), c.lower(r)};
  if (!std::isfinite(p.upper) || !std::isfinite(p.lower))
    fail(ErrorKind::integration, "non-finite system coefficient at r = " + std::to_string(r));
  return p;
}

Matrix2 derivative(const CoefficientPair& k, const Matrix2& y) {
  return {k.upper * y.m21, k.upper * y.m22, k.lower * y.m11, k.lower * y.m12};
}

Matrix2 axpy(const Matrix2& y, double h, const Matrix2& d) {
  return {y.m11 + h * d.m11, y.m12 + h * d.m12, y.m21 + h * d.m21, y.m22 + h * d.m22};
}

Matrix2 rk4_fundamental(const SystemCoefficients& c, double start, double end, std::size_t steps) {
  const double h = (end - start) / static_cast<double>(steps);
  Matrix2 y = Matrix2::identity();
  CoefficientPair left = sample(c, start);
  for (std::size_t i = 0; i < steps; ++i) {
    const double r = start + static_cast<double>(i) * h;
    const CoefficientPair mid = sample(c, r + 0.5 * h);
    const CoefficientPair right = sample(c, i + 1 == steps ? end : r + h);
    const Matrix2 k1 = derivative(left, y);
    const Matrix2 k2 = derivative(mid, axpy(y, 0.5 * h, k1));
    const Matrix2 k3 = derivative(mid, axpy(y, 0.5 * h, k2));
    const Matrix2 k4 = derivative(right, axpy(y, h, k3));
    y.m11 += h / 6.0 * (k1.m11 + 2.0 * k2.m11 + 2.0 * k3.m11 + k4.m11);
    y.m12 += h / 6.0 * (k1.m12 + 2.0 * k2.m12 + 2.0 * k3.m12 + k4.m12);
    y.m21 += h / 6.0 * (k1.m21 + 2.0 * k2.m21 + 2.0 * k3.m21 + k4.m21);
    y.m22 += h / 6.0 * (k1.m22 + 2.0 * k2.m22 + 2.0 * k3.m22 + k4.m22);
    left = right;
  }
  return y;
}

std::size_t initial_steps(const SystemCoefficients& c, double start, double end, std::size_t min_steps) {
  double rate = 0.0;
  for (int i = 0; i <= 8; ++i) {
    const auto p = sample(c, start + (end - start) * i / 8.0);
    rate = std::max({rate, std::sqrt(std::abs(p.upper * p.lower)), 0.25 * std::abs(p.upper),
                     0.25 * std::abs(p.lower)});
  }
  const double estimate = std::ceil(12.0 * std::abs(end - start) * rate);
  return std::max<std::size_t>(min_steps, static_cast<std::size_t>(estimate));
}

}  // namespace

TransferMatrix integrate_fundamental(const SystemCoefficients& coeffs, double start, double end,
                                     const StepControl& control) {
  if (!std::isfinite(start) || !std::isfinite(end))
    fail(ErrorKind::integration, "interval endpoints must be finite");
  TransferMatrix out{Matrix2::identity(), start, end, coeffs.lambda};
  if (start == end) return out;
  if (control.fixed_step > 0.0) {
    const auto steps = static_cast<std::size_t>(std::ceil(std::abs(end - start) / control.fixed_step));
    out.m = rk4_fundamental(coeffs, start, end, std::max<std::size_t>(1, steps));
    return out;
  }
  std::size_t steps = initial_steps(coeffs, start, end, control.min_steps);
  Matrix2 coarse = rk4_fundamental(coeffs, start, end, steps);
  for (int i = 0; i < control.max_doublings; ++i) {
    steps *= 2;
    const Matrix2 fine = rk4_fundamental(coeffs, start, end, steps);
    const double change = max_abs_difference(fine, coarse);
    if (!std::isfinite(change)) fail(ErrorKind::integration, "fundamental matrix diverged");
    if (change <= control.tolerance * std::max(1.0, fine.max_abs())) {
      out.m = fine;
      return out;
    }
    coarse = fine;
  }
  fail(ErrorKind::integration, "step halving did not reach tolerance on [" + std::to_string(start) + ", " +
                                   std::to_string(end) + "]");
}

TransferMatrix bump_transfer(const Bump& bump, double start, double lambda, int channel,
                             const StepControl& control) {
  const double height = bump.height;
  const BumpProfile& profile = bump.profile;
  // Clamped so rounding at the support ends never samples the zero outside.
  SystemCoefficients coeffs{[&profile, height, start](double r) {
                              return height * profile(std::clamp(r - start, 0.0, profile.width()));
                            },
                            lambda, channel};
  std::vector<double> cuts = profile.breakpoints();
  cuts.insert(cuts.begin(), 0.0);
  cuts.push_back(profile.width());
  Matrix2 total = Matrix2::identity();
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto piece = integrate_fundamental(coeffs, start + cuts[i], start + cuts[i + 1], control);
    total = piece.m * total;
  }
  return {total, start, start + profile.width(), lambda};
}

TransferMatrix closed_form_rectangular(double height, double width, double lambda) {
  // With upper = 1 + lambda - H and lower = 1 + H - lambda the solution is
  // [[C, upper S], [lower S, C]], C = cos(mu w), S = sin(mu w) / mu, where
  // mu^2 = -upper * lower = (lambda - H)^2 - 1 (hyperbolic when negative).
  const double upper = 1.0 + lambda - height;
  const double lower = 1.0 + height - lambda;
  const double disc = (lambda - height - 1.0) * (lambda - height + 1.0);
  double c = 0.0;
  double s = 0.0;
  if (std::abs(std::abs(lambda - height) - 1.0) < 1e-8) {
    const double x = disc * width * width;
    c = 1.0 - x / 2.0 + x * x / 24.0;
    s = width * (1.0 - x / 6.0 + x * x / 120.0);
  } else if (disc > 0.0) {
    const double mu = std::sqrt(disc);
    c = std::cos(mu * width);
    s = std::sin(mu * width) / mu;
  } else {
    const double nu = std::sqrt(-disc);
    c = std::cosh(nu * width);
    s = std::sinh(nu * width) / nu;
  }
  return {{c, upper * s, lower * s, c}, 0.0, width, lambda};
}

TransferMatrix free_transfer(double length, double lambda) { return closed_form_rectangular(0.0, length, lambda); }

PrueferState propagate_free(const PrueferState& state, double dr, const SpectralParam& param) {
  if (dr < 0.0) fail(ErrorKind::domain, "free propagation needs a nonnegative step");
  return {state.r + dr, state.log_radius, state.angle - param.kappa() * dr};
}

}  // namespace bumpdirac
