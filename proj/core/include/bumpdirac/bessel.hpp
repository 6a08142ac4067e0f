#pragma once

#include <complex>

namespace bumpdirac {

// Bessel and Weber functions of half-integer order n + 1/2 (n >= 0) from the
// spherical closed forms. J runs Miller's downward recurrence normalized on
// order 1/2 or 3/2, Y runs the (stable) upward recurrence.
double bessel_j_half(int n, double x);
double bessel_y_half(int n, double x);
std::complex<double> bessel_j_half(int n, std::complex<double> x);
std::complex<double> bessel_y_half(int n, std::complex<double> x);

// Index n with n + 1/2 = |k + 1/2| (upper = true) or |k - 1/2| (upper = false).
int half_order_index(int k, bool upper);

}  // namespace bumpdirac
