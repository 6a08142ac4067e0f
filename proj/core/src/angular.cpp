#include "bumpdirac/angular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bumpdirac/bessel.hpp"
#include "bumpdirac/errors.hpp"
#include "bumpdirac/parallel.hpp"
#include "bumpdirac/quadrature.hpp"

namespace bumpdirac {

namespace {

// m - 1 without cancellation at large r.
double mass_excess(int k, double r) {
  const double t = static_cast<double>(k) * k / (r * r);
  return t / (std::sqrt(1.0 + t) + 1.0);
}

double sign_of(int k) { return k > 0 ? 1.0 : -1.0; }

}  // namespace

MassDrift mass_drift(int k, double r) {
  if (!(r > 0.0)) fail(ErrorKind::domain, "mass and drift need r > 0");
  const double kk = static_cast<double>(k) * k;
  return {std::sqrt(1.0 + kk / (r * r)), static_cast<double>(k) / (2.0 * (r * r + kk))};
}

ChannelTerms channel_terms(int k, const SpectralParam& param, double r, double angle) {
  const double drift = mass_drift(k, r).drift;
  const double excess = mass_excess(k, r);
  const double kappa = param.kappa();
  const double lambda = param.lambda();
  const double c2 = std::cos(2.0 * angle);
  return {drift / kappa + lambda / kappa * excess,
          (lambda + c2) / kappa * drift + (1.0 + lambda * c2) / kappa * excess};
}

ChannelConstants channel_constants(int k, const SpectralParam& param) {
  const double ak = std::abs(static_cast<double>(k));
  const double kappa = std::abs(param.kappa());
  const double lambda = std::abs(param.lambda());
  return {ak / (2.0 * kappa) + lambda * ak * ak / kappa, (lambda + 1.0) * (ak + 2.0 * ak * ak) / (2.0 * kappa)};
}

Perturbation channel_perturbation(int k, const SpectralParam& param) {
  if (k == 0) return {};
  return {[k, param](double r) { return channel_terms(k, param, r, 0.0).radial; },
          [k, param](double r, double angle) { return channel_terms(k, param, r, angle).angular; }};
}

Matrix2 transform_matrix(int k, double r) {
  if (!(r > 0.0)) fail(ErrorKind::domain, "transform matrix needs r > 0");
  if (k == 0) return Matrix2::identity();
  const double c = r / std::hypot(r, static_cast<double>(k));
  const double plus = std::sqrt(0.5 * (1.0 + c));
  const double minus = std::sqrt(0.5 * (1.0 - c));
  const double s = sign_of(k);
  return {s * plus, -minus, minus, s * plus};
}

FreeSolutions free_solutions(int k, const SpectralParam& param, double r) {
  if (k == 0) fail(ErrorKind::domain, "Bessel free solutions need k != 0");
  if (!(r > 0.0)) fail(ErrorKind::domain, "free solutions are evaluated at r > 0");
  const double kappa = std::abs(param.kappa());
  const double x = kappa * r;
  const double root = std::sqrt(r);
  const double lower = sign_of(k) * kappa / (1.0 + param.lambda());
  const int up = half_order_index(k, true);
  const int down = half_order_index(k, false);
  return {{root * bessel_j_half(up, x), lower * root * bessel_j_half(down, x)},
          {root * bessel_y_half(up, x), lower * root * bessel_y_half(down, x)}};
}

ComplexFreeSolutions free_solutions(int k, std::complex<double> lambda, double r) {
  if (k == 0) fail(ErrorKind::domain, "Bessel free solutions need k != 0");
  if (!(r > 0.0)) fail(ErrorKind::domain, "free solutions are evaluated at r > 0");
  const std::complex<double> kappa = std::sqrt(lambda * lambda - 1.0);
  const std::complex<double> x = kappa * r;
  const double root = std::sqrt(r);
  const std::complex<double> lower = sign_of(k) * kappa / (1.0 + lambda);
  const int up = half_order_index(k, true);
  const int down = half_order_index(k, false);
  return {{root * bessel_j_half(up, x), lower * root * bessel_j_half(down, x)},
          {root * bessel_y_half(up, x), lower * root * bessel_y_half(down, x)}};
}

double radial_term_integral(int k, const SpectralParam& param, double from, double to) {
  if (!(from > 0.0)) fail(ErrorKind::domain, "radial term integral needs a positive lower limit");
  if (to < from) return -radial_term_integral(k, param, to, from);
  if (k == 0 || from == to) return 0.0;
  // t = 1/r turns the 1/r^2 tail into a bounded integrand on [1/to, 1/from].
  auto integrand = [&](double t) {
    const double r = 1.0 / t;
    return channel_terms(k, param, r, 0.0).radial * r * r;
  };
  const double lo = std::isinf(to) ? 0.0 : 1.0 / to;
  return adaptive_simpson(integrand, lo, 1.0 / from, 1e-14, 16, 50);
}

double ChannelFactor::operator()(double y, double z) const {
  return std::exp(-2.0 * weight) * density_factor(coeffs, y + z);
}

ChannelFactor make_channel_factor(const BumpCoefficients& coeffs, double weight) {
  return {coeffs, weight, mean_log_factor(coeffs) - 2.0 * weight};
}

ChannelFactor ftilde_mtilde(const BumpCoefficients& coeffs, int k, const SpectralParam& param, double gap_start,
                            double gap_end) {
  if (gap_start < 1.0) fail(ErrorKind::domain, "channel gaps lie in [1, inf)");
  return make_channel_factor(coeffs, radial_term_integral(k, param, gap_start, gap_end));
}

PeriodAverages period_averages(const ChannelFactor& factor, double z, double abs_tol) {
  const int panels = static_cast<int>(std::clamp(16.0 * std::sqrt(factor.coeffs.mean), 16.0, 4096.0));
  const double tol = abs_tol * std::numbers::pi;
  const double f = adaptive_simpson([&](double y) { return factor(y, z); }, 0.0, std::numbers::pi, tol, panels, 50);
  const double h = adaptive_simpson([&](double y) { return std::log(factor(y, z)); }, 0.0, std::numbers::pi, tol,
                                    panels, 50);
  return {f / std::numbers::pi, h / std::numbers::pi};
}

double density_k(const BumpPotential& potential, const SpectralParam& param, int k,
                 const ChannelDensityOptions& options) {
  if (!potential.empty() && !(potential.bump_start(0) > 1.0))
    fail(ErrorKind::configuration, "channel densities need the first bump beyond r = 1 (d_1 > 1)");
  const double support = std::max(1.0, potential.support_end());
  double end = support;
  if (options.tail_end != 0.0) {
    if (options.tail_end < support)
      fail(ErrorKind::configuration, "tail_end lies before the end of the last bump");
    end = options.tail_end;
  }
  const Perturbation perturbation = channel_perturbation(k, param);
  const Perturbation* hooks = k == 0 ? nullptr : &perturbation;
  const PrueferState start = boundary_state(potential.boundary_angle(), param, 1.0);
  const double scale = (param.lambda() + 1.0) / param.lambda() / std::numbers::pi;

  if (options.route == DensityRoute::direct) {
    const auto final = propagate_pruefer(potential, param, start, end, hooks, options.step).final;
    return scale * std::exp(-2.0 * final.log_radius);
  }

  double log_product = 0.0;
  PrueferState state = start;
  for (std::size_t j = 0; j < potential.bump_count(); ++j) {
    const double a = potential.bump_start(j);
    const auto entry = propagate_pruefer(potential, param, state, a, hooks, options.step).final;
    const double weight = entry.log_radius - state.log_radius;
    const double y = state.angle - param.kappa() * (a - state.r);
    const double z = entry.angle - y;
    const auto transfer = k == 0 ? bump_transfer_at(potential, j, param.lambda(), DensityOptions{options.step})
                                 : bump_transfer(potential.bump(j), a, param.lambda(), k, options.step);
    const auto factor = make_channel_factor(abc_from_transfer(transfer, param), weight);
    log_product += std::log(factor(y, z));
    const Vec2 out = apply_transfer(transfer, from_pruefer(1.0, entry.angle, param));
    state = {potential.bump_end(j), 0.0, to_pruefer(out, param).angle};
  }
  if (end > state.r) {
    const auto tail = propagate_pruefer(potential, param, state, end, hooks, options.step).final;
    log_product -= 2.0 * (tail.log_radius - state.log_radius);
  }
  return scale * std::exp(log_product - 2.0 * start.log_radius);
}

ChannelSweep channel_sweep(const BumpPotential& potential, int k_max, std::span<const double> kappas,
                           unsigned threads, const ChannelDensityOptions& options) {
  if (k_max < 1) fail(ErrorKind::configuration, "channel sweep needs k_max >= 1");
  std::vector<int> ks;
  for (int k = -k_max; k <= k_max; ++k)
    if (k != 0) ks.push_back(k);
  ChannelSweep out;
  out.kappas.assign(kappas.begin(), kappas.end());
  out.channels = parallel_map(ks.size(), threads, [&](std::size_t i) {
    ChannelProfile profile;
    profile.k = ks[i];
    try {
      for (double kappa : kappas) {
        const auto param = SpectralParam::from_kappa(kappa);
        profile.constants.push_back(channel_constants(profile.k, param));
        profile.densities.push_back(density_k(potential, param, profile.k, options));
      }
    } catch (const std::exception& e) {
      profile.error = e.what();
      profile.densities.clear();
    }
    return profile;
  });
  out.union_min.assign(kappas.size(), std::numeric_limits<double>::infinity());
  out.union_max.assign(kappas.size(), -std::numeric_limits<double>::infinity());
  for (const auto& ch : out.channels) {
    if (!ch.error.empty()) continue;
    for (std::size_t i = 0; i < kappas.size(); ++i) {
      out.union_min[i] = std::min(out.union_min[i], ch.densities[i]);
      out.union_max[i] = std::max(out.union_max[i], ch.densities[i]);
    }
  }
  return out;
}

double greens_hs_norm(int k, std::complex<double> lambda, const GreenOptions& options) {
  if (lambda.imag() == 0.0) fail(ErrorKind::resolvent_parameter, "Green kernel needs Im lambda != 0");
  if (k == 0) fail(ErrorKind::domain, "Green kernel diagnostic needs k != 0");
  if (options.nodes < 2) fail(ErrorKind::configuration, "Green kernel needs at least 2 nodes");
  const double eta = options.boundary_angle;
  if (!(eta >= 0.0 && eta < std::numbers::pi)) fail(ErrorKind::domain, "boundary angle must lie in [0, pi)");
  using Complex = std::complex<double>;
  const double se = std::sin(eta);
  const double ce = std::cos(eta);
  // y = (v . n) w - (w . n) v with n = (sin eta, cos eta) meets y1 sin eta + y2 cos eta = 0 at r = 1.
  const auto at_one = free_solutions(k, lambda, 1.0);
  const Complex cv = at_one.regular[0] * se + at_one.regular[1] * ce;
  const Complex cw = at_one.singular[0] * se + at_one.singular[1] * ce;
  auto boundary_solution = [&](const ComplexFreeSolutions& s) {
    return std::array<Complex, 2>{cv * s.singular[0] - cw * s.regular[0], cv * s.singular[1] - cw * s.regular[1]};
  };
  const auto y1 = boundary_solution(at_one);
  const Complex wronskian = at_one.regular[0] * y1[1] - at_one.regular[1] * y1[0];
  if (std::abs(wronskian) == 0.0) fail(ErrorKind::degenerate_solution, "regular solution meets the boundary condition");

  const std::size_t n = options.nodes;
  const double h = 1.0 / static_cast<double>(n);
  std::vector<double> regular(n);
  std::vector<double> boundary(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = static_cast<double>(i + 1) * h;
    const auto s = free_solutions(k, lambda, r);
    const auto y = boundary_solution(s);
    regular[i] = std::norm(s.regular[0]) + std::norm(s.regular[1]);
    boundary[i] = std::norm(y[0]) + std::norm(y[1]);
  }
  const bool swapped = options.orientation == KernelOrientation::singular_inner;
  const auto& inner = swapped ? boundary : regular;
  const auto& outer = swapped ? regular : boundary;
  // Both integrands are taken as 0 at r = 0 for the first trapezoid cell.
  double cumulative = 0.5 * h * inner[0];
  double previous = outer[0] * cumulative;
  double total = 0.5 * h * previous;
  for (std::size_t i = 1; i < n; ++i) {
    cumulative += 0.5 * h * (inner[i - 1] + inner[i]);
    const double current = outer[i] * cumulative;
    total += 0.5 * h * (previous + current);
    previous = current;
  }
  return 2.0 * total / std::norm(wronskian);
}

}  // namespace bumpdirac
