#include "bumpdirac/pruefer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bumpdirac/errors.hpp"

namespace bumpdirac {

SpectralParam SpectralParam::from_lambda(double lambda) {
  if (!(std::abs(lambda) > 1.0) || !std::isfinite(lambda))
    fail(ErrorKind::gap_parameter, "spectral parameter must satisfy |lambda| > 1, got " + std::to_string(lambda));
  const double root = std::sqrt((std::abs(lambda) - 1.0) * (std::abs(lambda) + 1.0));
  const double kappa = std::copysign(root, lambda);
  return {lambda, kappa, std::sqrt((lambda - 1.0) / (lambda + 1.0))};
}

SpectralParam SpectralParam::from_kappa(double kappa) {
  if (kappa == 0.0 || !std::isfinite(kappa))
    fail(ErrorKind::gap_parameter, "quasi-momentum must be nonzero and finite");
  const double lambda = std::copysign(std::hypot(kappa, 1.0), kappa);
  // ratio = kappa / (1 + lambda), stable for both branches.
  const double ratio = kappa > 0.0 ? kappa / (1.0 + lambda) : (std::abs(lambda) + 1.0) / std::abs(kappa);
  return {lambda, kappa, ratio};
}

double kappa_of_lambda(double lambda) { return SpectralParam::from_lambda(lambda).kappa(); }
double lambda_of_kappa(double kappa) { return SpectralParam::from_kappa(kappa).lambda(); }

PrueferCoordinates to_pruefer(const Vec2& psi, const SpectralParam& param) {
  if (psi[0] == 0.0 && psi[1] == 0.0) fail(ErrorKind::degenerate_solution, "zero vector has no Pruefer angle");
  const double scaled = psi[1] / param.ellipse_ratio();
  return {std::hypot(psi[0], scaled), std::atan2(scaled, psi[0])};
}

Vec2 from_pruefer(double radius, double angle, const SpectralParam& param) {
  return {radius * std::cos(angle), radius * param.ellipse_ratio() * std::sin(angle)};
}

double boundary_pruefer_angle(double boundary_angle, const SpectralParam& param) {
  constexpr double half_pi = 0.5 * std::numbers::pi;
  if (boundary_angle == half_pi) return half_pi;
  return std::atan(std::tan(boundary_angle) / param.ellipse_ratio());
}

PrueferState boundary_state(double boundary_angle, const SpectralParam& param, double r) {
  const Vec2 psi{std::cos(boundary_angle), std::sin(boundary_angle)};
  const auto pc = to_pruefer(psi, param);
  return {r, std::log(pc.radius), boundary_pruefer_angle(boundary_angle, param)};
}

namespace {

struct AngleRadius {
  double angle;
  double log_radius;
};

class SegmentLaw {
 public:
  SegmentLaw(const BumpPotential& potential, const SpectralParam& param, const Perturbation* perturbation)
      : potential_(potential), param_(param), perturbation_(perturbation) {}

  // Restricts the potential to the bump covering (lo, hi), so edge samples
  // see the one-sided value of this segment and not the neighbour's.
  void select_segment(double lo, double hi) {
    active_ = nullptr;
    const double mid = 0.5 * (lo + hi);
    for (std::size_t j = 0; j < potential_.bump_count(); ++j) {
      if (potential_.bump_start(j) > mid) break;
      if (mid <= potential_.bump_end(j)) {
        active_ = &potential_.bump(j);
        origin_ = potential_.bump_start(j);
        return;
      }
    }
  }

  double potential(double r) const {
    if (active_ == nullptr) return 0.0;
    return active_->height * active_->profile(std::clamp(r - origin_, 0.0, active_->profile.width()));
  }

  AngleRadius rate(double r, double angle) const {
    const double kappa = param_.kappa();
    const double q = potential(r);
    const double s2 = std::sin(2.0 * angle);
    double d_angle = -kappa + q / kappa * (param_.lambda() + std::cos(2.0 * angle));
    double d_log = q / kappa * s2;
    if (perturbation_ != nullptr) {
      if (perturbation_->angular) d_angle += perturbation_->angular(r, angle);
      if (perturbation_->radial) d_log += s2 * perturbation_->radial(r);
    }
    return {d_angle, d_log};
  }

  AngleRadius integrate(double start, double end, AngleRadius y, std::size_t steps) const {
    const double h = (end - start) / static_cast<double>(steps);
    for (std::size_t i = 0; i < steps; ++i) {
      const double r = start + static_cast<double>(i) * h;
      const auto k1 = rate(r, y.angle);
      const auto k2 = rate(r + 0.5 * h, y.angle + 0.5 * h * k1.angle);
      const auto k3 = rate(r + 0.5 * h, y.angle + 0.5 * h * k2.angle);
      const auto k4 = rate(i + 1 == steps ? end : r + h, y.angle + h * k3.angle);
      y.angle += h / 6.0 * (k1.angle + 2.0 * k2.angle + 2.0 * k3.angle + k4.angle);
      y.log_radius += h / 6.0 * (k1.log_radius + 2.0 * k2.log_radius + 2.0 * k3.log_radius + k4.log_radius);
    }
    return y;
  }

  double rate_scale(double start, double end) const {
    double scale = std::abs(param_.kappa());
    for (int i = 0; i <= 8; ++i) {
      const double r = start + (end - start) * i / 8.0;
      const double q = std::abs(potential(r));
      double s = std::abs(param_.kappa()) + q / std::abs(param_.kappa()) * (std::abs(param_.lambda()) + 1.0);
      if (perturbation_ != nullptr) {
        if (perturbation_->angular) s += std::abs(perturbation_->angular(r, 0.0)) + std::abs(perturbation_->angular(r, 0.25 * std::numbers::pi));
        if (perturbation_->radial) s += std::abs(perturbation_->radial(r));
      }
      scale = std::max(scale, s);
    }
    return scale;
  }

 private:
  const BumpPotential& potential_;
  const SpectralParam& param_;
  const Perturbation* perturbation_;
  const Bump* active_ = nullptr;
  double origin_ = 0.0;
};

AngleRadius integrate_segment(const SegmentLaw& law, double start, double end, AngleRadius y,
                              const StepControl& control) {
  if (control.fixed_step > 0.0) {
    const auto steps = static_cast<std::size_t>(std::ceil((end - start) / control.fixed_step));
    return law.integrate(start, end, y, std::max<std::size_t>(1, steps));
  }
  const double estimate = std::ceil(6.0 * (end - start) * law.rate_scale(start, end));
  std::size_t steps = std::max<std::size_t>(control.min_steps, static_cast<std::size_t>(estimate));
  AngleRadius coarse = law.integrate(start, end, y, steps);
  for (int i = 0; i < control.max_doublings; ++i) {
    steps *= 2;
    const AngleRadius fine = law.integrate(start, end, y, steps);
    const double scale = std::max(1.0, std::abs(fine.angle - y.angle));
    const double change = std::max(std::abs(fine.angle - coarse.angle), std::abs(fine.log_radius - coarse.log_radius));
    if (!std::isfinite(change)) fail(ErrorKind::integration, "Pruefer integration diverged");
    if (change <= control.tolerance * scale) return fine;
    coarse = fine;
  }
  fail(ErrorKind::integration, "Pruefer step halving did not converge on [" + std::to_string(start) + ", " +
                                   std::to_string(end) + "]");
}

}  // namespace

PrueferTrace propagate_pruefer(const BumpPotential& potential, const SpectralParam& param,
                               const PrueferState& start, double r_end, const Perturbation* perturbation,
                               const StepControl& control) {
  if (start.r < 0.0) fail(ErrorKind::domain, "propagation must start at r >= 0");
  if (r_end < start.r) fail(ErrorKind::domain, "propagation end lies before its start");
  const bool perturbed = perturbation != nullptr && (perturbation->radial || perturbation->angular);

  // Segment boundaries: every bump edge and profile kink inside the range.
  std::vector<double> cuts{start.r, r_end};
  for (std::size_t j = 0; j < potential.bump_count(); ++j) {
    const double a = potential.bump_start(j);
    cuts.push_back(a);
    cuts.push_back(potential.bump_end(j));
    for (double k : potential.bump(j).profile.breakpoints()) cuts.push_back(a + k);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double c) { return c < start.r || c > r_end; }),
             cuts.end());

  SegmentLaw law(potential, param, perturbed ? perturbation : nullptr);
  PrueferTrace trace;
  PrueferState state = start;
  auto record = [&](double r) {
    for (std::size_t j = 0; j < potential.bump_count(); ++j) {
      if (potential.bump_start(j) < start.r) continue;
      if (potential.bump_start(j) == r) trace.bump_starts.push_back(state);
      if (potential.bump_end(j) == r) trace.bump_ends.push_back(state);
    }
  };
  auto loaded = [&](double r) {
    for (std::size_t j = 0; j < potential.bump_count(); ++j) {
      if (potential.bump_start(j) <= r && r <= potential.bump_end(j)) return potential.bump(j).height != 0.0;
      if (potential.bump_start(j) > r) break;
    }
    return false;
  };
  record(state.r);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    if (!perturbed && !loaded(0.5 * (lo + hi))) {
      state = propagate_free(state, hi - lo, param);
    } else {
      law.select_segment(lo, hi);
      const auto y = integrate_segment(law, lo, hi, {state.angle, state.log_radius}, control);
      state = {hi, y.log_radius, y.angle};
    }
    state.r = hi;
    record(hi);
  }
  trace.final = state;
  return trace;
}

}  // namespace bumpdirac
