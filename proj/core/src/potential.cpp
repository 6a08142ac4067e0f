#include "bumpdirac/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bumpdirac/errors.hpp"
#include "bumpdirac/quadrature.hpp"

namespace bumpdirac {

namespace {

void require_width(double width) {
  if (!(width > 0.0) || !std::isfinite(width))
    fail(ErrorKind::geometry, "bump width must be positive, got " + std::to_string(width));
}

// Neumaier-compensated running sum, so endpoints of long chains do not drift.
class CompensatedSum {
 public:
  double add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
    return sum_ + carry_;
  }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace

BumpProfile::BumpProfile(ProfileShape shape, double width, std::vector<double> samples)
    : shape_(shape), width_(width), samples_(std::move(samples)) {}

BumpProfile BumpProfile::rectangular(double width) {
  require_width(width);
  return BumpProfile(ProfileShape::rectangular, width);
}

BumpProfile BumpProfile::raised_cosine(double width) {
  require_width(width);
  return BumpProfile(ProfileShape::raised_cosine, width);
}

BumpProfile BumpProfile::triangular(double width) {
  require_width(width);
  return BumpProfile(ProfileShape::triangular, width);
}

BumpProfile BumpProfile::sampled(std::span<const double> samples, double width) {
  return normalize_profile(samples, width);
}

double BumpProfile::operator()(double s) const noexcept {
  if (s < 0.0 || s > width_) return 0.0;
  switch (shape_) {
    case ProfileShape::rectangular:
      return 1.0 / width_;
    case ProfileShape::raised_cosine:
      return (1.0 - std::cos(2.0 * std::numbers::pi * s / width_)) / width_;
    case ProfileShape::triangular:
      return 2.0 / width_ * (1.0 - std::abs(2.0 * s / width_ - 1.0));
    case ProfileShape::sampled: {
      const std::size_t cells = samples_.size() - 1;
      const double x = s / width_ * static_cast<double>(cells);
      const std::size_t i = std::min(static_cast<std::size_t>(x), cells - 1);
      const double t = x - static_cast<double>(i);
      return (1.0 - t) * samples_[i] + t * samples_[i + 1];
    }
  }
  return 0.0;
}

std::vector<double> BumpProfile::breakpoints() const {
  switch (shape_) {
    case ProfileShape::triangular:
      return {0.5 * width_};
    case ProfileShape::sampled: {
      std::vector<double> out;
      const std::size_t cells = samples_.size() - 1;
      for (std::size_t i = 1; i < cells; ++i)
        out.push_back(width_ * static_cast<double>(i) / static_cast<double>(cells));
      return out;
    }
    default:
      return {};
  }
}

double BumpProfile::mass() const {
  auto pieces = breakpoints();
  pieces.insert(pieces.begin(), 0.0);
  pieces.push_back(width_);
  const auto& self = *this;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const std::size_t panels = shape_ == ProfileShape::raised_cosine ? 256 : 2;
    total += composite_simpson([&](double s) { return self(s); }, pieces[i], pieces[i + 1], panels);
  }
  return total;
}

BumpProfile normalize_profile(std::span<const double> samples, double width) {
  require_width(width);
  if (samples.size() < 2)
    fail(ErrorKind::shape, "a sampled profile needs at least 2 nodes, got " + std::to_string(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i] >= 0.0) || !std::isfinite(samples[i]))
      fail(ErrorKind::shape, "profile sample " + std::to_string(i) + " is negative or not finite");
  }
  const double spacing = width / static_cast<double>(samples.size() - 1);
  // Simpson on each linear cell; the midpoint is the mean of the endpoints.
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const double mid = 0.5 * (samples[i] + samples[i + 1]);
    mass += spacing / 6.0 * (samples[i] + 4.0 * mid + samples[i + 1]);
  }
  if (!(mass > 0.0)) fail(ErrorKind::degenerate_profile, "profile samples are all zero");
  std::vector<double> scaled(samples.begin(), samples.end());
  for (double& v : scaled) v /= mass;
  return BumpProfile(ProfileShape::sampled, width, std::move(scaled));
}

BumpPotential::BumpPotential(std::vector<Bump> bumps, std::vector<double> distances, double boundary_angle)
    : bumps_(std::move(bumps)), distances_(std::move(distances)), boundary_angle_(boundary_angle) {
  if (bumps_.size() != distances_.size())
    fail(ErrorKind::geometry, "got " + std::to_string(bumps_.size()) + " bumps but " +
                                  std::to_string(distances_.size()) + " distances");
  if (!(boundary_angle >= 0.0 && boundary_angle < std::numbers::pi))
    fail(ErrorKind::domain, "boundary angle must lie in [0, pi), got " + std::to_string(boundary_angle));
  starts_.reserve(bumps_.size());
  ends_.reserve(bumps_.size());
  CompensatedSum position;
  for (std::size_t j = 0; j < bumps_.size(); ++j) {
    const double d = distances_[j];
    if (!(d > 0.0) || !std::isfinite(d))
      fail(ErrorKind::geometry, "distance " + std::to_string(j) + " must be positive, got " + std::to_string(d));
    const double h = bumps_[j].height;
    if (!(h >= 0.0) || !std::isfinite(h))
      fail(ErrorKind::domain, "bump height " + std::to_string(j) + " must be nonnegative, got " + std::to_string(h));
    starts_.push_back(position.add(d));
    ends_.push_back(position.add(bumps_[j].profile.width()));
  }
}

double BumpPotential::operator()(double r) const {
  if (r < 0.0) fail(ErrorKind::domain, "potential evaluated at negative radius " + std::to_string(r));
  auto it = std::upper_bound(starts_.begin(), starts_.end(), r);
  if (it == starts_.begin()) return 0.0;
  const auto j = static_cast<std::size_t>(it - starts_.begin()) - 1;
  if (r > ends_[j]) return 0.0;
  return bumps_[j].height * bumps_[j].profile(r - starts_[j]);
}

BumpPotential BumpPotential::appended(Bump bump, double distance) const {
  auto bumps = bumps_;
  auto distances = distances_;
  bumps.push_back(std::move(bump));
  distances.push_back(distance);
  return BumpPotential(std::move(bumps), std::move(distances), boundary_angle_);
}

BumpPotential BumpPotential::with_boundary_angle(double boundary_angle) const {
  return BumpPotential(bumps_, distances_, boundary_angle);
}

BumpPotential build_bump_potential(std::span<const double> heights, std::vector<BumpProfile> profiles,
                                   std::span<const double> distances, double boundary_angle) {
  if (heights.size() != profiles.size() || heights.size() != distances.size())
    fail(ErrorKind::geometry, "heights, profiles and distances must have equal lengths");
  std::vector<Bump> bumps;
  bumps.reserve(heights.size());
  for (std::size_t j = 0; j < heights.size(); ++j) bumps.push_back({heights[j], std::move(profiles[j])});
  return BumpPotential(std::move(bumps), std::vector<double>(distances.begin(), distances.end()), boundary_angle);
}

}  // namespace bumpdirac
