#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bumpdirac/errors.hpp"
#include "bumpdirac/parallel.hpp"

namespace bumpdirac {

template <class Density>
IntervalMeasure integrate_density(Density&& density, double lower, double upper, std::size_t start_intervals,
                                  const MeasureOptions& options) {
  struct Panel {
    double a, b, fa, fm, fb, whole;
  };
  const std::size_t n = std::max<std::size_t>(start_intervals, 2);
  const double span = upper - lower;
  const double h = span / static_cast<double>(n);
  auto node = [&](std::size_t i) { return i == 2 * n ? upper : lower + 0.5 * h * static_cast<double>(i); };
  const auto first = parallel_map(2 * n + 1, options.threads, [&](std::size_t i) { return density(node(i)); });
  std::size_t evaluations = first.size();

  std::vector<Panel> active;
  active.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = node(2 * i);
    const double b = node(2 * i + 2);
    active.push_back({a, b, first[2 * i], first[2 * i + 1], first[2 * i + 2],
                      (b - a) / 6.0 * (first[2 * i] + 4.0 * first[2 * i + 1] + first[2 * i + 2])});
  }

  // Every panel is compared with its two halves; the difference must fall
  // under its share of the relative tolerance, otherwise both halves go on.
  double accepted = 0.0;
  std::size_t panels = 0;
  while (!active.empty()) {
    double estimate = accepted;
    for (const auto& p : active) estimate += p.whole;
    const auto quarters = parallel_map(2 * active.size(), options.threads, [&](std::size_t i) {
      const Panel& p = active[i / 2];
      return density(i % 2 == 0 ? 0.75 * p.a + 0.25 * p.b : 0.25 * p.a + 0.75 * p.b);
    });
    evaluations += quarters.size();
    std::vector<Panel> next;
    for (std::size_t i = 0; i < active.size(); ++i) {
      const Panel& p = active[i];
      const double m = 0.5 * (p.a + p.b);
      const double fl = quarters[2 * i];
      const double fr = quarters[2 * i + 1];
      const double left = (m - p.a) / 6.0 * (p.fa + 4.0 * fl + p.fm);
      const double right = (p.b - m) / 6.0 * (p.fm + 4.0 * fr + p.fb);
      const double delta = left + right - p.whole;
      const double share = 15.0 * options.relative_tolerance * std::abs(estimate) * (p.b - p.a) / span;
      if (std::abs(delta) <= share || (p.b - p.a) <= 1e-14 * std::abs(span)) {
        accepted += left + right + delta / 15.0;
        panels += 2;
      } else {
        next.push_back({p.a, m, p.fa, fl, p.fm, left});
        next.push_back({m, p.b, p.fm, fr, p.fb, right});
      }
    }
    if (!std::isfinite(accepted)) fail(ErrorKind::integration, "density integral is not finite");
    if (evaluations > options.max_intervals && !next.empty())
      fail(ErrorKind::integration, "interval measure on [" + std::to_string(lower) + ", " + std::to_string(upper) +
                                       "] did not converge within the evaluation limit");
    active = std::move(next);
  }
  return {lower, upper, accepted, panels};
}

}  // namespace bumpdirac
