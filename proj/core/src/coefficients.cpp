#include "bumpdirac/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bumpdirac/errors.hpp"
#include "bumpdirac/quadrature.hpp"

namespace bumpdirac {

double BumpCoefficients::amplitude() const { return std::hypot(cos_part, sin_part); }

BumpCoefficients abc_from_transfer(const TransferMatrix& transfer, const SpectralParam& param) {
  const Matrix2& m = transfer.m;
  const double det = m.det();
  if (!(std::abs(det - 1.0) <= 1e-6))
    fail(ErrorKind::inconsistent_matrix, "transfer matrix determinant drifted to " + std::to_string(det));
  // Conjugate into coordinates where the Pruefer ellipse is a circle.
  const double s = param.ellipse_ratio();
  const double n11 = m.m11;
  const double n12 = m.m12 * s;
  const double n21 = m.m21 / s;
  const double n22 = m.m22;
  BumpCoefficients c;
  c.mean = 0.5 * (n11 * n11 + n12 * n12 + n21 * n21 + n22 * n22);
  c.cos_part = 0.5 * (n11 * n11 + n21 * n21 - n12 * n12 - n22 * n22);
  c.sin_part = n11 * n12 + n21 * n22;
  c.kappa = param.kappa();
  const double identity = c.mean * c.mean - c.cos_part * c.cos_part - c.sin_part * c.sin_part;
  if (!(std::abs(identity - det * det) <= 1e-9 * std::max(1.0, c.mean * c.mean)))
    fail(ErrorKind::inconsistent_matrix, "coefficient identity violated: " + std::to_string(identity));
  return c;
}

BumpCoefficients rephase(const BumpCoefficients& coeffs, double shift) {
  const double phase = 2.0 * coeffs.kappa * shift;
  const double cp = std::cos(phase);
  const double sp = std::sin(phase);
  BumpCoefficients out = coeffs;
  out.cos_part = coeffs.cos_part * cp - coeffs.sin_part * sp;
  out.sin_part = coeffs.cos_part * sp + coeffs.sin_part * cp;
  return out;
}

double density_factor(const BumpCoefficients& coeffs, double y) {
  return 1.0 / (coeffs.mean + coeffs.cos_part * std::cos(2.0 * y) + coeffs.sin_part * std::sin(2.0 * y));
}

double log_density_factor(const BumpCoefficients& coeffs, double y) { return std::log(density_factor(coeffs, y)); }

double mean_log_factor(const BumpCoefficients& coeffs) { return std::log(2.0 / (coeffs.mean + 1.0)); }

PeriodAverages period_averages(const BumpCoefficients& coeffs, double abs_tol) {
  // Sharp peaks for large mean need enough initial panels to be seen.
  const int panels = static_cast<int>(std::clamp(16.0 * std::sqrt(coeffs.mean), 16.0, 4096.0));
  const double tol = abs_tol * std::numbers::pi;
  const double f = adaptive_simpson([&](double y) { return density_factor(coeffs, y); }, 0.0, std::numbers::pi,
                                    tol, panels, 50);
  const double h = adaptive_simpson([&](double y) { return log_density_factor(coeffs, y); }, 0.0,
                                    std::numbers::pi, tol, panels, 50);
  return {f / std::numbers::pi, h / std::numbers::pi};
}

ProfileMoments profile_moments(const BumpProfile& profile, double offset, double kappa) {
  std::vector<double> cuts = profile.breakpoints();
  cuts.insert(cuts.begin(), 0.0);
  cuts.push_back(profile.width());
  const int panels = static_cast<int>(std::clamp(4.0 * std::abs(kappa) * profile.width(), 4.0, 4096.0));
  ProfileMoments out{0.0, 0.0};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    out.sin2 += adaptive_simpson(
        [&](double t) { return profile(t) * std::sin(2.0 * kappa * (t + offset)); }, cuts[i], cuts[i + 1], 1e-13,
        panels);
    out.cos2 += adaptive_simpson(
        [&](double t) { return profile(t) * std::cos(2.0 * kappa * (t + offset)); }, cuts[i], cuts[i + 1], 1e-13,
        panels);
  }
  return out;
}

double second_order_kernel(const BumpProfile& profile, double kappa) {
  const auto mom = profile_moments(profile, 0.0, kappa);
  return 4.0 / (kappa * kappa) * (mom.sin2 * mom.sin2 + mom.cos2 * mom.cos2);
}

AsymptoticCoefficients abc_asymptotic(const BumpProfile& profile, double offset, const SpectralParam& param,
                                      double height) {
  const double kappa = param.kappa();
  const auto mom = profile_moments(profile, offset, kappa);
  const double kernel = 4.0 / (kappa * kappa) * (mom.sin2 * mom.sin2 + mom.cos2 * mom.cos2);
  AsymptoticCoefficients out;
  out.kernel = kernel;
  out.mean = 1.0 + 0.5 * height * height * kernel;
  out.cos_part = -2.0 * height / kappa * mom.sin2;
  out.sin_part = 2.0 * height / kappa * mom.cos2;
  out.mean_log = -0.25 * height * height * kernel;
  return out;
}

std::vector<double> divergence_partial_sums(std::span<const Bump> bumps, const SpectralParam& param) {
  std::vector<double> sums;
  sums.reserve(bumps.size());
  double total = 0.0;
  // Consecutive bumps often share a profile; reuse the last kernel when they do.
  const BumpProfile* last_profile = nullptr;
  double last_kernel = 0.0;
  for (const auto& b : bumps) {
    const bool same = last_profile != nullptr && last_profile->shape() == b.profile.shape() &&
                      last_profile->width() == b.profile.width() &&
                      std::equal(last_profile->samples().begin(), last_profile->samples().end(),
                                 b.profile.samples().begin(), b.profile.samples().end());
    if (!same) {
      last_kernel = second_order_kernel(b.profile, param.kappa());
      last_profile = &b.profile;
    }
    total += b.height * b.height * last_kernel;
    sums.push_back(total);
  }
  return sums;
}

double log_bound_constant(double c, std::size_t scan_points) {
  if (!(c > 0.0 && c < 1.0)) fail(ErrorKind::domain, "log bound constant needs c in (0, 1)");
  auto ratio = [](double s) {
    const double u = s - 1.0;
    const double l = std::log1p(u);
    double denom = u - l;
    if (std::abs(u) < 1e-3) denom = u * u * (0.5 - u / 3.0 + u * u / 4.0 - u * u * u / 5.0);
    if (denom == 0.0) return 2.0;
    return l * l / denom;
  };
  double best = 2.0;
  const std::size_t n = std::max<std::size_t>(scan_points, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = c + (1.0 - c) * static_cast<double>(i) / static_cast<double>(n - 1);
    best = std::max(best, ratio(s));
  }
  return best;
}

}  // namespace bumpdirac
