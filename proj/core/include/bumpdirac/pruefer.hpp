#pragma once

#include <functional>
#include <vector>

#include "bumpdirac/linalg.hpp"
#include "bumpdirac/ode.hpp"
#include "bumpdirac/potential.hpp"
#include "bumpdirac/spectral_param.hpp"

namespace bumpdirac {

struct PrueferCoordinates {
  double radius;
  double angle;
};

// psi1 = R cos(theta), psi2 = R * ratio * sin(theta); the angle is returned in (-pi, pi].
PrueferCoordinates to_pruefer(const Vec2& psi, const SpectralParam& param);
Vec2 from_pruefer(double radius, double angle, const SpectralParam& param);

// Pruefer angle of the boundary direction (cos eta, sin eta), reduced to (-pi/2, pi/2].
double boundary_pruefer_angle(double boundary_angle, const SpectralParam& param);

// State at `r` for the solution leaving the boundary in direction eta with
// unit Euclidean norm.
PrueferState boundary_state(double boundary_angle, const SpectralParam& param, double r = 0.0);

// Extra terms added by an angular-momentum channel:
//   (log R)' += sin(2 theta) * radial(r),   theta' += angular(r, theta).
struct Perturbation {
  std::function<double(double)> radial;
  std::function<double(double, double)> angular;
};

struct PrueferTrace {
  std::vector<PrueferState> bump_starts;
  std::vector<PrueferState> bump_ends;
  PrueferState final;
};

// Integrates the angle/log-radius laws from `start` to `r_end`. Potential-free
// stretches without perturbation are stepped exactly; everything else uses RK4
// with step halving. Records the state at every bump start and end crossed.
PrueferTrace propagate_pruefer(const BumpPotential& potential, const SpectralParam& param,
                               const PrueferState& start, double r_end, const Perturbation* perturbation = nullptr,
                               const StepControl& control = {});

}  // namespace bumpdirac
