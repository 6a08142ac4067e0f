#pragma once

#include <cstddef>
#include <functional>

#include "bumpdirac/linalg.hpp"
#include "bumpdirac/potential.hpp"
#include "bumpdirac/spectral_param.hpp"

namespace bumpdirac {

// Off-diagonal Dirac system
//   psi1' = upper(r) psi2,   upper = -q + 1 + lambda  (+ (m-1) - l in channel k)
//   psi2' = lower(r) psi1,   lower =  q + 1 - lambda  (+ (m-1) + l in channel k)
// channel == 0 switches the angular mass and drift terms off.
struct SystemCoefficients {
  std::function<double(double)> potential;
  double lambda = 2.0;
  int channel = 0;

  double upper(double r) const;
  double lower(double r) const;
};

struct TransferMatrix {
  Matrix2 m;
  double start = 0.0;
  double end = 0.0;
  double lambda = 0.0;

  double det() const { return m.det(); }
};

struct StepControl {
  // A positive value pins the step and skips the halving check.
  double fixed_step = 0.0;
  double tolerance = 1e-10;
  std::size_t min_steps = 16;
  int max_doublings = 18;
};

// Fundamental matrix at `end` of the solution with identity at `start`,
// classical RK4; the step is halved until entries move by less than the
// tolerance (relative to max(1, |M|)).
TransferMatrix integrate_fundamental(const SystemCoefficients& coeffs, double start, double end,
                                     const StepControl& control = {});

// Same, split at the profile's kinks, for bump `bump` placed at `start`.
TransferMatrix bump_transfer(const Bump& bump, double start, double lambda, int channel = 0,
                             const StepControl& control = {});

// Constant-coefficient solution on a rectangular bump of height H and width alpha.
TransferMatrix closed_form_rectangular(double height, double width, double lambda);

// Potential-free propagator over `length`.
TransferMatrix free_transfer(double length, double lambda);

// Exact potential-free Pruefer step: the angle turns by -kappa * dr, the radius is unchanged.
PrueferState propagate_free(const PrueferState& state, double dr, const SpectralParam& param);

inline Vec2 apply_transfer(const TransferMatrix& transfer, const Vec2& psi) { return transfer.m * psi; }

}  // namespace bumpdirac
