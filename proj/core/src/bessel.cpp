#include "bumpdirac/bessel.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "bumpdirac/errors.hpp"

namespace bumpdirac {

namespace {

using std::abs;

template <class T>
T prefactor(T x) {
  return std::sqrt(T(2.0) * x / std::numbers::pi);
}

// Spherical j_n by downward recurrence from a start order well above n and |x|.
template <class T>
T spherical_j(int n, T x) {
  const double ax = abs(x);
  if (ax == 0.0) return n == 0 ? T(1.0) : T(0.0);
  const int start = n + static_cast<int>(std::ceil(ax)) + 30;
  std::vector<T> values(static_cast<std::size_t>(start) + 2, T(0.0));
  values[start + 1] = T(0.0);
  values[start] = T(1e-300);
  for (int m = start; m >= 1; --m) {
    values[m - 1] = T(2.0 * m + 1.0) / x * values[m] - values[m + 1];
    if (abs(values[m - 1]) > 1e250) {
      for (int i = m - 1; i <= start + 1; ++i) values[i] *= T(1e-250);
    }
  }
  const T j0 = std::sin(x) / x;
  const T j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  // Normalize on whichever low order is further from a zero.
  const T scale = abs(j0) >= abs(j1) ? j0 / values[0] : j1 / values[1];
  return values[n] * scale;
}

template <class T>
T spherical_y(int n, T x) {
  if (abs(x) == 0.0) fail(ErrorKind::domain, "Weber function is singular at 0");
  T prev = -std::cos(x) / x;
  if (n == 0) return prev;
  T cur = -std::cos(x) / (x * x) - std::sin(x) / x;
  for (int m = 1; m < n; ++m) {
    const T next = T(2.0 * m + 1.0) / x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void check_order(int n) {
  if (n < 0) fail(ErrorKind::domain, "half-integer Bessel index must be nonnegative");
}

}  // namespace

double bessel_j_half(int n, double x) {
  check_order(n);
  if (x == 0.0) return 0.0;
  return prefactor(x) * spherical_j(n, x);
}

double bessel_y_half(int n, double x) {
  check_order(n);
  return prefactor(x) * spherical_y(n, x);
}

std::complex<double> bessel_j_half(int n, std::complex<double> x) {
  check_order(n);
  if (x == 0.0) return 0.0;
  return prefactor(x) * spherical_j(n, x);
}

std::complex<double> bessel_y_half(int n, std::complex<double> x) {
  check_order(n);
  return prefactor(x) * spherical_y(n, x);
}

int half_order_index(int k, bool upper) {
  if (upper) return k >= 0 ? k : -k - 1;
  return k >= 1 ? k - 1 : -k;
}

}  // namespace bumpdirac
