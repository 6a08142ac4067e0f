#include "bumpdirac/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bumpdirac/coefficients.hpp"
#include "bumpdirac/errors.hpp"
#include "bumpdirac/parallel.hpp"
#include "bumpdirac/quadrature.hpp"

namespace bumpdirac {

double d_factor(double kappa, double left_radius) {
  const double lambda = lambda_of_kappa(kappa);
  return (lambda + 1.0) / lambda / (left_radius * left_radius);
}

TransferMatrix bump_transfer_at(const BumpPotential& potential, std::size_t j, double lambda,
                                const DensityOptions& options) {
  const Bump& b = potential.bump(j);
  if (options.closed_form_rectangles && b.profile.shape() == ProfileShape::rectangular) {
    auto t = closed_form_rectangular(b.height / b.profile.width(), b.profile.width(), lambda);
    t.start = potential.bump_start(j);
    t.end = potential.bump_end(j);
    return t;
  }
  return bump_transfer(b, potential.bump_start(j), lambda, 0, options.step);
}

double density_product(const BumpPotential& potential, const SpectralParam& param, const DensityOptions& options) {
  const PrueferState start = boundary_state(potential.boundary_angle(), param);
  double angle = start.angle;
  double log_product = 0.0;
  for (std::size_t j = 0; j < potential.bump_count(); ++j) {
    const double entry = angle - param.kappa() * potential.distance(j);
    const auto transfer = bump_transfer_at(potential, j, param.lambda(), options);
    const auto coeffs = abc_from_transfer(transfer, param);
    log_product += log_density_factor(coeffs, entry);
    const Vec2 out = apply_transfer(transfer, from_pruefer(1.0, entry, param));
    angle = to_pruefer(out, param).angle;
  }
  return std::exp(log_product) * d_factor(param.kappa(), start.radius()) / std::numbers::pi;
}

double density_direct(const BumpPotential& potential, const SpectralParam& param, const DensityOptions& options) {
  const PrueferState start = boundary_state(potential.boundary_angle(), param);
  const auto trace = propagate_pruefer(potential, param, start, potential.support_end(), nullptr, options.step);
  const double lambda = param.lambda();
  return std::exp(-2.0 * trace.final.log_radius) * (lambda + 1.0) / lambda / std::numbers::pi;
}

DensityProfile density_profile(const BumpPotential& potential, std::span<const double> kappas, DensityRoute route,
                               unsigned threads, const DensityOptions& options) {
  DensityProfile out;
  out.kappas.assign(kappas.begin(), kappas.end());
  out.route = route;
  out.densities = parallel_map(kappas.size(), threads, [&](std::size_t i) {
    const auto param = SpectralParam::from_kappa(kappas[i]);
    return route == DensityRoute::product ? density_product(potential, param, options)
                                          : density_direct(potential, param, options);
  });
  return out;
}

std::size_t resolving_intervals(double lower, double upper, double length, std::size_t floor) {
  const double estimate = 16.0 * std::abs(upper - lower) * (length + 1.0) / std::numbers::pi;
  return std::max<std::size_t>(floor, static_cast<std::size_t>(std::ceil(estimate)));
}

IntervalMeasure measure_on_interval(const BumpPotential& potential, double lower, double upper,
                                    const MeasureOptions& options) {
  if (!(lower < upper)) fail(ErrorKind::domain, "measure interval must have lower < upper");
  if (lower <= 0.0 && upper >= 0.0) fail(ErrorKind::gap_parameter, "measure interval must not contain kappa = 0");
  const std::size_t start = resolving_intervals(lower, upper, potential.support_end(), options.min_intervals);
  return integrate_density(
      [&](double kappa) { return density_product(potential, SpectralParam::from_kappa(kappa), options.density); },
      lower, upper, start, options);
}

double angle_at(const BumpPotential& potential, const SpectralParam& param, double b, const StepControl& step) {
  const PrueferState start = boundary_state(potential.boundary_angle(), param);
  return propagate_pruefer(potential, param, start, b, nullptr, step).final.angle;
}

namespace {

void check_regular_range(const BumpPotential& potential, double b, double lambda1, double lambda2) {
  if (!(b > potential.support_end()))
    fail(ErrorKind::domain, "regular problem needs b beyond the last bump (b = " + std::to_string(b) + ")");
  if (!(std::abs(lambda1) > 1.0 && std::abs(lambda2) > 1.0))
    fail(ErrorKind::gap_parameter, "eigenvalue range must lie outside [-1, 1]");
  if ((lambda1 > 0.0) != (lambda2 > 0.0))
    fail(ErrorKind::gap_parameter, "eigenvalue range must not straddle the gap");
}

}  // namespace

long count_eigenvalues_regular(const BumpPotential& potential, double b, double lambda1, double lambda2,
                               const StepControl& step) {
  check_regular_range(potential, b, lambda1, lambda2);
  if (lambda1 == lambda2) return 0;
  const double t1 = angle_at(potential, SpectralParam::from_lambda(lambda1), b, step);
  const double t2 = angle_at(potential, SpectralParam::from_lambda(lambda2), b, step);
  return std::lround(std::abs(t2 - t1) / std::numbers::pi);
}

double norming_integral(const BumpPotential& potential, const SpectralParam& param, double b,
                        double nodes_per_unit_phase, const StepControl& step) {
  const double s2 = param.ellipse_ratio() * param.ellipse_ratio();
  auto weight = [&](const PrueferState& st) {
    const double c = std::cos(st.angle);
    const double s = std::sin(st.angle);
    return std::exp(2.0 * st.log_radius) * (c * c + s2 * s * s);
  };
  // Segment edges: every bump edge below b.
  std::vector<double> cuts{0.0, b};
  for (std::size_t j = 0; j < potential.bump_count(); ++j) {
    cuts.push_back(potential.bump_start(j));
    cuts.push_back(potential.bump_end(j));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double c) { return c > b; }), cuts.end());

  PrueferState state = boundary_state(potential.boundary_angle(), param);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    auto panels = static_cast<std::size_t>(std::ceil(nodes_per_unit_phase * (hi - lo) * std::abs(param.kappa())));
    panels = std::max<std::size_t>(panels, 8);
    if (panels % 2 != 0) ++panels;
    const double h = (hi - lo) / static_cast<double>(panels);
    std::vector<double> values;
    values.reserve(panels + 1);
    values.push_back(weight(state));
    for (std::size_t k = 1; k <= panels; ++k) {
      const double next = k == panels ? hi : lo + static_cast<double>(k) * h;
      state = propagate_pruefer(potential, param, state, next, nullptr, step).final;
      values.push_back(weight(state));
    }
    total += simpson_samples(values, h);
  }
  return total;
}

StepFunction regular_step_function(const BumpPotential& potential, double b, double lambda1, double lambda2,
                                   const StepFunctionOptions& options) {
  check_regular_range(potential, b, lambda1, lambda2);
  double k1 = kappa_of_lambda(std::min(lambda1, lambda2));
  double k2 = kappa_of_lambda(std::max(lambda1, lambda2));
  const double cell = std::numbers::pi / (options.cells_per_winding * b);
  const auto cells = static_cast<std::size_t>(std::ceil((k2 - k1) / cell));
  const double dk = (k2 - k1) / static_cast<double>(cells);
  auto winding = [&](double kappa) {
    return angle_at(potential, SpectralParam::from_kappa(kappa), b, options.step) / std::numbers::pi;
  };
  const auto w = parallel_map(cells + 1, options.threads,
                              [&](std::size_t i) { return winding(k1 + static_cast<double>(i) * dk); });

  struct Bracket {
    double lo, hi, wlo, target;
  };
  StepFunction out;
  std::vector<Bracket> brackets;
  for (std::size_t i = 0; i < cells; ++i) {
    const double lo = std::min(w[i], w[i + 1]);
    const double hi = std::max(w[i], w[i + 1]);
    // Integers m with the winding crossing m inside (lo, hi].
    const double first = std::floor(lo) + 1.0;
    const double last = std::floor(hi);
    const double crossings = last - first + 1.0;
    if (crossings <= 0.0) continue;
    const double a = k1 + static_cast<double>(i) * dk;
    if (crossings > 1.0) {
      out.unresolved.emplace_back(a, a + dk);
      continue;
    }
    brackets.push_back({a, a + dk, w[i], first});
  }
  out.steps = parallel_map(brackets.size(), options.threads, [&](std::size_t i) {
    Bracket br = brackets[i];
    double lo = br.lo;
    double hi = br.hi;
    const double sign_lo = br.wlo - br.target;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double val = winding(mid) - br.target;
      if ((val > 0.0) == (sign_lo > 0.0))
        lo = mid;
      else
        hi = mid;
    }
    const double kappa = 0.5 * (lo + hi);
    const auto param = SpectralParam::from_kappa(kappa);
    const double norm = norming_integral(potential, param, b, options.nodes_per_unit_phase, options.step);
    return EigenStep{param.lambda(), kappa, 1.0 / norm};
  });
  return out;
}

}  // namespace bumpdirac
