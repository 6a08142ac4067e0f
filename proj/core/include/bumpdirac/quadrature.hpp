#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "bumpdirac/errors.hpp"

namespace bumpdirac {

namespace detail {

template <class F>
double adaptive_simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                             double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson with absolute tolerance. The interval is pre-split into
// `initial_panels` pieces so oscillatory integrands cannot fool the first
// error estimate.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol, int initial_panels = 8,
                        int max_depth = 40) {
  if (a == b) return 0.0;
  const double width = (b - a) / initial_panels;
  double total = 0.0;
  for (int i = 0; i < initial_panels; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == initial_panels) ? b : lo + width;
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fmid = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    total += detail::adaptive_simpson_step(f, lo, hi, flo, fmid, fhi, whole, abs_tol / initial_panels,
                                           max_depth);
  }
  return total;
}

// Composite Simpson with `intervals` (rounded up to even) equal panels.
template <class F>
double composite_simpson(F&& f, double a, double b, std::size_t intervals) {
  if (intervals < 2) intervals = 2;
  if (intervals % 2 != 0) ++intervals;
  const double h = (b - a) / static_cast<double>(intervals);
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i < intervals; ++i) {
    const double v = f(a + static_cast<double>(i) * h);
    if (i % 2 == 1)
      odd += v;
    else
      even += v;
  }
  return h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b));
}

// Simpson over equally spaced samples; requires an odd sample count >= 3.
double simpson_samples(std::span<const double> values, double spacing);

double trapezoid_samples(std::span<const double> values, double spacing);

}  // namespace bumpdirac
