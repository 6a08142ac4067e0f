#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bumpdirac {

enum class ProfileShape { rectangular, raised_cosine, triangular, sampled };

// Unit-mass bump shape on [0, width]. Named shapes are evaluated analytically;
// sampled shapes interpolate linearly between equally spaced nodes.
class BumpProfile {
 public:
  static BumpProfile rectangular(double width);
  static BumpProfile raised_cosine(double width);
  static BumpProfile triangular(double width);
  static BumpProfile sampled(std::span<const double> samples, double width);

  double width() const noexcept { return width_; }
  ProfileShape shape() const noexcept { return shape_; }
  std::span<const double> samples() const noexcept { return samples_; }

  // Zero outside [0, width].
  double operator()(double s) const noexcept;

  // Integral over the support; Simpson on every smooth piece.
  double mass() const;

  // Interior points where the shape is not smooth.
  std::vector<double> breakpoints() const;

 private:
  BumpProfile(ProfileShape shape, double width, std::vector<double> samples = {});
  friend BumpProfile normalize_profile(std::span<const double> samples, double width);

  ProfileShape shape_;
  double width_;
  std::vector<double> samples_;
};

// Rescales nonnegative equally spaced samples so the interpolated shape has
// unit mass.
BumpProfile normalize_profile(std::span<const double> samples, double width);

struct Bump {
  double height;
  BumpProfile profile;
};

// Finite chain of bumps separated by gaps: bump j starts at the end of bump
// j-1 plus distances[j], the first one at distances[0] from the origin.
class BumpPotential {
 public:
  BumpPotential() = default;
  BumpPotential(std::vector<Bump> bumps, std::vector<double> distances, double boundary_angle = 0.0);

  std::size_t bump_count() const noexcept { return bumps_.size(); }
  bool empty() const noexcept { return bumps_.empty(); }
  std::span<const Bump> bumps() const noexcept { return bumps_; }
  const Bump& bump(std::size_t j) const { return bumps_.at(j); }
  std::span<const double> distances() const noexcept { return distances_; }
  double distance(std::size_t j) const { return distances_.at(j); }
  double bump_start(std::size_t j) const { return starts_.at(j); }
  double bump_end(std::size_t j) const { return ends_.at(j); }
  // End of the last bump, 0 for the free potential.
  double support_end() const noexcept { return ends_.empty() ? 0.0 : ends_.back(); }
  double boundary_angle() const noexcept { return boundary_angle_; }

  double operator()(double r) const;

  BumpPotential appended(Bump bump, double distance) const;
  BumpPotential with_boundary_angle(double boundary_angle) const;

 private:
  std::vector<Bump> bumps_;
  std::vector<double> distances_;
  std::vector<double> starts_;
  std::vector<double> ends_;
  double boundary_angle_ = 0.0;
};

BumpPotential build_bump_potential(std::span<const double> heights, std::vector<BumpProfile> profiles,
                                   std::span<const double> distances, double boundary_angle = 0.0);

inline double evaluate(const BumpPotential& potential, double r) { return potential(r); }

}  // namespace bumpdirac
