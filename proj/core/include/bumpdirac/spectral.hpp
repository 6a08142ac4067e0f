#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "bumpdirac/ode.hpp"
#include "bumpdirac/potential.hpp"
#include "bumpdirac/pruefer.hpp"
#include "bumpdirac/spectral_param.hpp"

namespace bumpdirac {

// ((lambda + 1) / lambda) / R_left^2 for lambda = sign(kappa) sqrt(kappa^2 + 1).
double d_factor(double kappa, double left_radius);

struct DensityOptions {
  StepControl step{};
  // Use the exact propagator for rectangular bumps in the product route.
  bool closed_form_rectangles = true;
};

// Product of per-bump density factors along the propagated angle, times d_factor / pi.
double density_product(const BumpPotential& potential, const SpectralParam& param, const DensityOptions& options = {});

// 1 / (pi R_n^2) * (lambda + 1) / lambda from the directly integrated radius at the last bump end.
double density_direct(const BumpPotential& potential, const SpectralParam& param, const DensityOptions& options = {});

// Transfer matrix of bump j at the given spectral parameter.
TransferMatrix bump_transfer_at(const BumpPotential& potential, std::size_t j, double lambda,
                                const DensityOptions& options = {});

enum class DensityRoute { product, direct };

struct DensityProfile {
  std::vector<double> kappas;
  std::vector<double> densities;
  DensityRoute route = DensityRoute::product;
  double left_endpoint = 0.0;
};

DensityProfile density_profile(const BumpPotential& potential, std::span<const double> kappas, DensityRoute route,
                               unsigned threads = 1, const DensityOptions& options = {});

struct IntervalMeasure {
  double lower;
  double upper;
  double value;
  std::size_t intervals;
};

struct MeasureOptions {
  double relative_tolerance = 1e-8;
  std::size_t min_intervals = 64;
  std::size_t max_intervals = std::size_t{1} << 24;  // density evaluations
  unsigned threads = 1;
  DensityOptions density{};
};

// Composite Simpson of any density over [lower, upper], starting from
// `start_intervals` equal panels. A panel is halved until halving moves its
// value by less than its length share of the relative tolerance, so narrow
// resonances get nodes without refining the whole interval.
template <class Density>
IntervalMeasure integrate_density(Density&& density, double lower, double upper, std::size_t start_intervals,
                                  const MeasureOptions& options);

IntervalMeasure measure_on_interval(const BumpPotential& potential, double lower, double upper,
                                    const MeasureOptions& options = {});

// Number of panels that resolves oscillations generated by a chain of total length `length`.
std::size_t resolving_intervals(double lower, double upper, double length, std::size_t floor);

// Unwrapped Pruefer angle at b of the solution obeying the boundary condition at 0.
double angle_at(const BumpPotential& potential, const SpectralParam& param, double b, const StepControl& step = {});

// Eigenvalue count of the problem on [0, b] (psi2(b) = 0) between lambda1 and lambda2, by winding.
long count_eigenvalues_regular(const BumpPotential& potential, double b, double lambda1, double lambda2,
                               const StepControl& step = {});

struct EigenStep {
  double lambda;
  double kappa;
  double jump;  // 1 / a^2, a^2 = int_0^b |psi|^2
};

struct StepFunction {
  std::vector<EigenStep> steps;
  // Sub-intervals of kappa where more than one eigenvalue fell into a scan cell.
  std::vector<std::pair<double, double>> unresolved;
};

struct StepFunctionOptions {
  double cells_per_winding = 8.0;
  double nodes_per_unit_phase = 48.0;
  StepControl step{};
  unsigned threads = 1;
};

// int_0^b |psi|^2 dr for the boundary-normalized solution.
double norming_integral(const BumpPotential& potential, const SpectralParam& param, double b,
                        double nodes_per_unit_phase = 48.0, const StepControl& step = {});

StepFunction regular_step_function(const BumpPotential& potential, double b, double lambda1, double lambda2,
                                   const StepFunctionOptions& options = {});

}  // namespace bumpdirac

#include "bumpdirac/detail/integrate_density.hpp"
