#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bumpdirac/coefficients.hpp"
#include "bumpdirac/linalg.hpp"
#include "bumpdirac/potential.hpp"
#include "bumpdirac/pruefer.hpp"
#include "bumpdirac/spectral.hpp"
#include "bumpdirac/spectral_param.hpp"

namespace bumpdirac {

// m(r) = sqrt(1 + k^2/r^2) and l(r) = k / (2 (r^2 + k^2)).
struct MassDrift {
  double mass;
  double drift;
};

MassDrift mass_drift(int k, double r);

// F_k and G_k: extra terms of the log-radius and angle laws in channel k.
struct ChannelTerms {
  double radial;
  double angular;
};

ChannelTerms channel_terms(int k, const SpectralParam& param, double r, double angle);

// |F_k| <= radial / r^2 and |G_k| <= angular / r^2 for r >= 1.
struct ChannelConstants {
  double radial;
  double angular;
};

ChannelConstants channel_constants(int k, const SpectralParam& param);

// Perturbation hooks for propagate_pruefer; empty for k = 0.
Perturbation channel_perturbation(int k, const SpectralParam& param);

// Orthogonal A(r) taking the 1/r form to the mass/drift form: if v solves
//   v' = [[-k/r, 1 + lambda], [1 - lambda, k/r]] v
// then A(r)^T v solves the channel system of SystemCoefficients.
Matrix2 transform_matrix(int k, double r);

// Free solutions of the 1/r form: `regular` built from J, `singular` from Y.
struct FreeSolutions {
  Vec2 regular;
  Vec2 singular;
};

FreeSolutions free_solutions(int k, const SpectralParam& param, double r);

struct ComplexFreeSolutions {
  std::array<std::complex<double>, 2> regular;
  std::array<std::complex<double>, 2> singular;
};

// Same at complex lambda, with kappa = sqrt(lambda^2 - 1) on the principal branch.
ComplexFreeSolutions free_solutions(int k, std::complex<double> lambda, double r);

// int_from^to F_k(r) dr.
double radial_term_integral(int k, const SpectralParam& param, double from, double to);

// Channel density factor of one bump: exp(-2 weight) / (A + B cos 2(y+z) + C sin 2(y+z)).
struct ChannelFactor {
  BumpCoefficients coeffs;
  double weight = 0.0;
  double mtilde = 0.0;  // log(2 / (A + 1)) - 2 weight

  double operator()(double y, double z) const;
};

ChannelFactor make_channel_factor(const BumpCoefficients& coeffs, double weight);

// Factor whose weight is int F_k over the gap [gap_start, gap_end].
ChannelFactor ftilde_mtilde(const BumpCoefficients& coeffs, int k, const SpectralParam& param, double gap_start,
                            double gap_end);

// Averages over y in [0, pi] at fixed z.
PeriodAverages period_averages(const ChannelFactor& factor, double z, double abs_tol = 1e-10);

struct ChannelDensityOptions {
  DensityRoute route = DensityRoute::product;
  // Propagate past the last bump up to this radius (0: stop at the last bump end).
  double tail_end = 0.0;
  StepControl step{};
};

// Spectral density of channel k on [1, inf) with boundary direction
// (cos eta, sin eta) at r = 1. Bumps must start beyond r = 1.
double density_k(const BumpPotential& potential, const SpectralParam& param, int k,
                 const ChannelDensityOptions& options = {});

struct ChannelProfile {
  int k = 0;
  std::vector<double> densities;
  std::vector<ChannelConstants> constants;
  std::string error;
};

struct ChannelSweep {
  std::vector<double> kappas;
  std::vector<ChannelProfile> channels;
  // Pointwise min and max over the channels that finished.
  std::vector<double> union_min;
  std::vector<double> union_max;
};

// Channels -k_max..-1, 1..k_max. A failing channel records its message and the sweep goes on.
ChannelSweep channel_sweep(const BumpPotential& potential, int k_max, std::span<const double> kappas,
                           unsigned threads = 1, const ChannelDensityOptions& options = {});

enum class KernelOrientation {
  regular_inner,   // 2 int |y|^2 int_0^r |v|^2
  singular_inner,  // roles swapped: diverges at 0
};

struct GreenOptions {
  std::size_t nodes = 2000;
  double boundary_angle = 0.0;
  KernelOrientation orientation = KernelOrientation::regular_inner;
};

// Hilbert-Schmidt double integral of the Green kernel on (0, 1] times |W(v, y)|^2,
// divided back by |W|^2; uniform nodes r_i = i / nodes with trapezoid sums.
double greens_hs_norm(int k, std::complex<double> lambda, const GreenOptions& options = {});

}  // namespace bumpdirac
