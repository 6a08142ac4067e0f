#pragma once

#include <cmath>

namespace bumpdirac {

// Spectral parameter outside the gap [-1, 1], carried together with its
// quasi-momentum kappa = sign(lambda) sqrt(lambda^2 - 1).
class SpectralParam {
 public:
  static SpectralParam from_lambda(double lambda);
  static SpectralParam from_kappa(double kappa);

  double lambda() const noexcept { return lambda_; }
  double kappa() const noexcept { return kappa_; }
  // sqrt((lambda - 1) / (lambda + 1)): minor/major semi-axis of the Pruefer ellipse.
  double ellipse_ratio() const noexcept { return ratio_; }

 private:
  SpectralParam(double lambda, double kappa, double ratio) : lambda_(lambda), kappa_(kappa), ratio_(ratio) {}

  double lambda_;
  double kappa_;
  double ratio_;
};

double kappa_of_lambda(double lambda);
double lambda_of_kappa(double kappa);

// Solution state in Pruefer coordinates. The angle is unwrapped and the
// radius is kept as its logarithm so long chains cannot overflow.
struct PrueferState {
  double r = 0.0;
  double log_radius = 0.0;
  double angle = 0.0;

  double radius() const { return std::exp(log_radius); }
};

}  // namespace bumpdirac
