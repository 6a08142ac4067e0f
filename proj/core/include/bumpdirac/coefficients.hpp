#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bumpdirac/ode.hpp"
#include "bumpdirac/potential.hpp"
#include "bumpdirac/spectral_param.hpp"

namespace bumpdirac {

// Squared-radius gain across one bump as a function of the entry angle y:
//   R_out^2 / R_in^2 = mean + cos_part cos 2y + sin_part sin 2y,
// with mean^2 - cos_part^2 - sin_part^2 = det(M)^2 = 1.
struct BumpCoefficients {
  double mean = 1.0;
  double cos_part = 0.0;
  double sin_part = 0.0;
  double kappa = 0.0;

  double amplitude() const;
};

BumpCoefficients abc_from_transfer(const TransferMatrix& transfer, const SpectralParam& param);

// Coefficients with respect to an angle reference moved by `shift` along r
// (a bump placed at r = shift, phase measured from the origin).
BumpCoefficients rephase(const BumpCoefficients& coeffs, double shift);

// Density factor 1 / (mean + cos_part cos 2y + sin_part sin 2y) and its log.
double density_factor(const BumpCoefficients& coeffs, double y);
double log_density_factor(const BumpCoefficients& coeffs, double y);

// log(2 / (mean + 1)): the period average of the log factor.
double mean_log_factor(const BumpCoefficients& coeffs);

struct PeriodAverages {
  double factor;      // (1/pi) int_0^pi f dy
  double log_factor;  // (1/pi) int_0^pi log f dy
};

PeriodAverages period_averages(const BumpCoefficients& coeffs, double abs_tol = 1e-10);

// Weighted profile moments int W(s - offset) sin(2 kappa s) ds and the cosine
// counterpart, over the bump's absolute support.
struct ProfileMoments {
  double sin2;
  double cos2;
};

ProfileMoments profile_moments(const BumpProfile& profile, double offset, double kappa);

// Second-order small-height kernel: mean = 1 + height^2 kernel / 2 + O(height^3).
double second_order_kernel(const BumpProfile& profile, double kappa);

struct AsymptoticCoefficients {
  double mean;
  double cos_part;
  double sin_part;
  double mean_log;
  double kernel;
};

// Leading small-height behaviour of the coefficients of a bump at `offset`
// (phase measured from the origin; offset 0 matches abc_from_transfer).
AsymptoticCoefficients abc_asymptotic(const BumpProfile& profile, double offset, const SpectralParam& param,
                                      double height);

// Running sums of height_j^2 * kernel_j for j = 1..bumps.size().
std::vector<double> divergence_partial_sums(std::span<const Bump> bumps, const SpectralParam& param);

// K_c = max{2, max_{s in [c,1]} (log s)^2 / (s - 1 - log s)}, so that
// h^2 <= K_c (f - 1 - h) whenever f >= c and h = log f.
double log_bound_constant(double c, std::size_t scan_points = 100000);

}  // namespace bumpdirac
