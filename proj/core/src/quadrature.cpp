#include "bumpdirac/quadrature.hpp"

#include <string>

namespace bumpdirac {

double simpson_samples(std::span<const double> values, double spacing) {
  const std::size_t n = values.size();
  if (n < 3 || n % 2 == 0)
    fail(ErrorKind::domain, "Simpson needs an odd number (>= 3) of samples, got " + std::to_string(n));
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (i % 2 == 1)
      odd += values[i];
    else
      even += values[i];
  }
  return spacing / 3.0 * (values.front() + 4.0 * odd + 2.0 * even + values.back());
}

double trapezoid_samples(std::span<const double> values, double spacing) {
  if (values.size() < 2) return 0.0;
  double inner = 0.0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) inner += values[i];
  return spacing * (0.5 * (values.front() + values.back()) + inner);
}

}  // namespace bumpdirac
