#include "bumpdirac/construction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bumpdirac/parallel.hpp"
#include "bumpdirac/quadrature.hpp"

namespace bumpdirac {

double averaging_residual(const std::function<double(double)>& weight,
                          const std::function<double(double, double)>& periodic, double frequency, double alpha,
                          double beta) {
  if (!(beta > alpha)) fail(ErrorKind::domain, "averaging interval needs alpha < beta");
  auto mean = [&](double kappa) {
    return adaptive_simpson([&](double y) { return periodic(kappa, y); }, 0.0, std::numbers::pi, 1e-12, 16) /
           std::numbers::pi;
  };
  const double oscillations = (beta - alpha) * std::abs(frequency) / std::numbers::pi;
  const auto panels = static_cast<std::size_t>(std::max(256.0, std::ceil(512.0 * oscillations)));
  const double value = composite_simpson(
      [&](double kappa) { return weight(kappa) * (periodic(kappa, frequency * kappa) - mean(kappa)); }, alpha, beta,
      panels);
  return std::abs(value);
}

double GrowthSchedule::log_floor(std::size_t j) const {
  if (j == 0) fail(ErrorKind::domain, "bump indices start at 1");
  const double jm1 = static_cast<double>(j - 1);
  switch (mode) {
    case GrowthMode::exp_square:
      return jm1 * jm1;
    case GrowthMode::geometric:
      if (!(scale > 0.0 && base >= 1.0)) fail(ErrorKind::configuration, "geometric growth needs scale > 0, base >= 1");
      return std::log(scale) + jm1 * std::log(base);
    case GrowthMode::custom:
      if (j > custom.size()) fail(ErrorKind::configuration, "custom growth list has no entry " + std::to_string(j));
      if (!(custom[j - 1] > 0.0)) fail(ErrorKind::configuration, "custom distance floors must be positive");
      return std::log(custom[j - 1]);
  }
  return 0.0;
}

double GrowthSchedule::floor(std::size_t j) const {
  if (mode == GrowthMode::exp_square && j > 6)
    fail(ErrorKind::configuration, "exponential floors are only materialized for j <= 6");
  if (mode == GrowthMode::custom) {
    log_floor(j);
    return custom[j - 1];
  }
  if (mode == GrowthMode::geometric) {
    log_floor(j);
    return scale * std::pow(base, static_cast<double>(j - 1));
  }
  return std::exp(log_floor(j));
}

void EpsilonSchedule::validate() const {
  if (!(scale > 0.0)) fail(ErrorKind::configuration, "epsilon scale must be positive");
  if (mode == EpsilonMode::geometric && !(ratio > 0.0 && ratio < 1.0))
    fail(ErrorKind::configuration, "epsilon schedule is not summable: geometric ratio must lie in (0, 1)");
  if (mode == EpsilonMode::power && !(exponent > 1.0))
    fail(ErrorKind::configuration, "epsilon schedule is not summable: power exponent must exceed 1");
}

double EpsilonSchedule::operator()(std::size_t n) const {
  if (n == 0) fail(ErrorKind::domain, "stages start at 1");
  const double x = static_cast<double>(n);
  return mode == EpsilonMode::geometric ? scale * std::pow(ratio, x - 1.0) : scale * std::pow(x, -exponent);
}

std::vector<Interval> xi_intervals(std::size_t n) {
  if (n == 0) fail(ErrorKind::domain, "stages start at 1");
  const double outer = 2.0 * static_cast<double>(n);
  const double inner = 1.0 / outer;
  return {{-outer, -inner}, {inner, outer}};
}

namespace {

double channel_density(const BumpPotential& potential, double kappa, int channel, const DensityOptions& options) {
  const auto param = SpectralParam::from_kappa(kappa);
  if (channel == 0) return density_product(potential, param, options);
  return density_k(potential, param, channel, {DensityRoute::product, 0.0, options.step});
}

std::vector<Interval> split(std::span<const Interval> parts, std::size_t pieces) {
  std::vector<Interval> out;
  for (const auto& [lo, hi] : parts) {
    const double step = (hi - lo) / static_cast<double>(pieces);
    for (std::size_t i = 0; i < pieces; ++i)
      out.emplace_back(lo + static_cast<double>(i) * step, i + 1 == pieces ? hi : lo + static_cast<double>(i + 1) * step);
  }
  return out;
}

double lebesgue(std::span<const Interval> parts) {
  double total = 0.0;
  for (const auto& [lo, hi] : parts) total += hi - lo;
  return total;
}

}  // namespace

double stage_measure(const BumpPotential& potential, double lower, double upper, int channel,
                     const MeasureOptions& options) {
  if (channel == 0) return measure_on_interval(potential, lower, upper, options).value;
  if (!(lower < upper)) fail(ErrorKind::domain, "measure interval must have lower < upper");
  if (lower <= 0.0 && upper >= 0.0) fail(ErrorKind::gap_parameter, "measure interval must not contain kappa = 0");
  const std::size_t start = resolving_intervals(lower, upper, potential.support_end(), options.min_intervals);
  return integrate_density([&](double kappa) { return channel_density(potential, kappa, channel, options.density); },
                           lower, upper, start, options)
      .value;
}

SelectionFailure::SelectionFailure(const std::string& message, double best_distance, double best_gap)
    : Error(ErrorKind::selection_failure, message), best_distance_(best_distance), best_gap_(best_gap) {}

DistanceSelection select_next_distance(const BumpPotential& potential, const Bump& next,
                                       std::span<const Interval> tests, const SelectionOptions& options) {
  if (!(options.tolerance > 0.0)) fail(ErrorKind::configuration, "selection tolerance must be positive");
  if (!(options.floor > 0.0)) fail(ErrorKind::configuration, "distance floor must be positive");
  if (tests.empty()) fail(ErrorKind::configuration, "distance selection needs test intervals");
  std::vector<double> before;
  before.reserve(tests.size());
  for (const auto& [lo, hi] : tests) before.push_back(stage_measure(potential, lo, hi, options.channel, options.measure));

  DistanceSelection out;
  double best_gap = std::numeric_limits<double>::infinity();
  double best_distance = options.floor;
  for (int i = 0; i <= options.max_doublings; ++i) {
    const double d = std::ldexp(options.floor, i);
    const BumpPotential candidate = potential.appended(next, d);
    std::vector<double> gaps;
    double gap = 0.0;
    for (std::size_t t = 0; t < tests.size(); ++t) {
      const double after = stage_measure(candidate, tests[t].first, tests[t].second, options.channel, options.measure);
      gaps.push_back(std::abs(after - before[t]));
      gap = std::max(gap, gaps.back());
    }
    out.scan.emplace_back(d, gap);
    if (gap < best_gap) {
      best_gap = gap;
      best_distance = d;
    }
    if (gap < options.tolerance) {
      out.distance = d;
      out.gap = gap;
      out.interval_gaps = std::move(gaps);
      return out;
    }
  }
  throw SelectionFailure("no distance up to floor * 2^" + std::to_string(options.max_doublings) +
                             " met the measure tolerance " + std::to_string(options.tolerance) +
                             " (best gap " + std::to_string(best_gap) + " at d = " + std::to_string(best_distance) +
                             ")",
                         best_distance, best_gap);
}

ConcentrationSet concentration_set(const BumpPotential& potential, std::span<const Interval> xi, double threshold,
                                   const ConcentrationOptions& options) {
  if (!(threshold > 0.0)) fail(ErrorKind::domain, "concentration threshold must be positive");
  auto density = [&](double kappa) { return channel_density(potential, kappa, options.channel, options.density); };
  ConcentrationSet out;
  out.threshold = threshold;
  out.xi_measure = lebesgue(xi);
  const double length = potential.support_end();
  for (const auto& [lo, hi] : xi) {
    if (!(lo < hi)) fail(ErrorKind::domain, "concentration interval must have lower < upper");
    const double span = hi - lo;
    const double per_unit = std::max(options.cells_per_unit, 16.0 * (length + 1.0) / std::numbers::pi);
    const auto cells = static_cast<std::size_t>(std::max(1.0, std::ceil(per_unit * span)));
    std::vector<double> x(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) x[i] = i == cells ? hi : lo + span * static_cast<double>(i) / cells;
    std::vector<double> v = parallel_map(x.size(), options.threads, [&](std::size_t i) { return density(x[i]); });

    for (int depth = 0; depth < options.max_depth; ++depth) {
      std::vector<std::size_t> rough;
      for (std::size_t i = 0; i + 1 < x.size(); ++i)
        if (std::abs(v[i] - v[i + 1]) > options.variation * std::max(v[i], v[i + 1])) rough.push_back(i);
      if (rough.empty()) break;
      const auto mids = parallel_map(rough.size(), options.threads,
                                     [&](std::size_t i) { return density(0.5 * (x[rough[i]] + x[rough[i] + 1])); });
      std::vector<double> nx;
      std::vector<double> nv;
      nx.reserve(x.size() + rough.size());
      nv.reserve(x.size() + rough.size());
      std::size_t r = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        nx.push_back(x[i]);
        nv.push_back(v[i]);
        if (r < rough.size() && rough[r] == i) {
          nx.push_back(0.5 * (x[i] + x[i + 1]));
          nv.push_back(mids[r]);
          ++r;
        }
      }
      x = std::move(nx);
      v = std::move(nv);
    }

    const std::size_t n = x.size() - 1;
    const auto mid = parallel_map(n, options.threads, [&](std::size_t i) { return density(0.5 * (x[i] + x[i + 1])); });
    out.cells += n;
    for (std::size_t i = 0; i < n; ++i) {
      const double width = x[i + 1] - x[i];
      if (mid[i] >= threshold - 1e-12) {
        out.measure += width;
        if (!out.intervals.empty() && out.intervals.back().second == x[i])
          out.intervals.back().second = x[i + 1];
        else
          out.intervals.emplace_back(x[i], x[i + 1]);
      } else {
        out.retained += width / 6.0 * (v[i] + 4.0 * mid[i] + v[i + 1]);
      }
    }
  }
  out.retention_holds = out.retained <= threshold * out.xi_measure;
  return out;
}

Bump BumpSchedule::bump(std::size_t j) const {
  if (j == 0) fail(ErrorKind::domain, "bump indices start at 1");
  switch (mode) {
    case HeightMode::identical:
      return {height, profile};
    case HeightMode::inverse_sqrt:
      return {height / std::sqrt(static_cast<double>(j)), profile};
    case HeightMode::custom:
      if (j > custom.size()) fail(ErrorKind::configuration, "custom height list has no entry " + std::to_string(j));
      return {custom[j - 1], profile};
  }
  return {height, profile};
}

ConstructionResult build_pearson_sequence(const ConstructionConfig& config) {
  config.epsilon.validate();
  if (config.stages == 0 || config.bumps_per_stage == 0 || config.tests_per_component == 0)
    fail(ErrorKind::configuration, "construction needs at least one stage, bump and test interval");
  ConstructionResult result;
  result.potential = BumpPotential({}, {}, config.boundary_angle);
  const auto xi_first = xi_intervals(1);
  ConcentrationOptions concentration = config.concentration;
  concentration.channel = config.channel;
  std::size_t placed = 0;

  for (std::size_t n = 1; n <= config.stages; ++n) {
    ConstructionStage stage;
    stage.stage = n;
    stage.xi = xi_intervals(n);
    stage.epsilon = config.epsilon(n);
    const auto tests = split(stage.xi, config.tests_per_component);
    for (std::size_t b = 0; b < config.bumps_per_stage; ++b) {
      const std::size_t index = placed + 1;
      const double budget = stage.epsilon * std::ldexp(1.0, -static_cast<int>(index));
      SelectionOptions selection;
      selection.tolerance = budget;
      selection.floor = config.growth.floor(index);
      selection.channel = config.channel;
      selection.measure = config.measure;
      if (config.channel != 0 && index == 1 && !(selection.floor > 1.0))
        fail(ErrorKind::configuration, "channel constructions need a first distance floor above 1");
      try {
        const Bump next = config.bumps.bump(index);
        const auto chosen = select_next_distance(result.potential, next, tests, selection);
        result.potential = result.potential.appended(next, chosen.distance);
        stage.distances.push_back(chosen.distance);
        stage.gaps.push_back(chosen.gap);
        stage.budgets.push_back(budget);
        placed = index;
        if (config.on_bump) config.on_bump(index, chosen.distance, chosen.gap);
      } catch (const SelectionFailure& e) {
        result.complete = false;
        result.failure = "stage " + std::to_string(n) + ", bump " + std::to_string(index) + ": " + e.what();
        stage.bump_count = placed;
        result.stages.push_back(std::move(stage));
        return result;
      }
    }
    stage.bump_count = placed;
    stage.threshold = stage.epsilon / lebesgue(stage.xi);
    const auto s = concentration_set(result.potential, stage.xi, stage.threshold, concentration);
    stage.s_measure = s.measure;
    stage.s_intervals = s.intervals;
    stage.retained = s.retained;
    for (double t : config.fixed_thresholds)
      stage.fixed_measures.push_back(concentration_set(result.potential, xi_first, t, concentration).measure);
    result.stages.push_back(std::move(stage));
  }
  return result;
}

CertificateReport no_point_spectrum_certificate(std::span<const Bump> bumps, double kappa,
                                                const GrowthSchedule& growth, std::size_t terms) {
  if (kappa == 0.0 || !std::isfinite(kappa)) fail(ErrorKind::gap_parameter, "certificate needs kappa != 0");
  if (terms < 2) fail(ErrorKind::configuration, "certificate needs at least two terms");
  CertificateReport out;
  out.kappa = kappa;
  for (const auto& b : bumps) out.omega = std::max(out.omega, std::abs(b.height) * b.profile.mass());
  const double c = out.omega / std::abs(kappa);
  out.onset = c;
  double running = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j <= terms; ++j) {
    const double t = growth.log_floor(j + 1) - 2.0 * static_cast<double>(j) * c;
    out.log_terms.push_back(t);
    const double hi = std::max(running, t);
    running = hi + std::log1p(std::exp(std::min(running, t) - hi));
    out.log_partial_sums.push_back(running);
  }
  for (std::size_t n = 2; n <= terms; ++n) {
    const double dn = static_cast<double>(n);
    const double increment = out.log_terms[n - 1] - out.log_terms[n - 2];
    const double bound = growth.mode == GrowthMode::exp_square
                             ? (2.0 * dn - 1.0) - 2.0 * c
                             : growth.log_floor(n + 1) - growth.log_floor(n) - 2.0 * c;
    out.term_increments.push_back(increment);
    out.increment_bounds.push_back(bound);
    out.partial_sum_increments.push_back(out.log_partial_sums[n - 1] - out.log_partial_sums[n - 2]);
    if (dn > c && increment < bound - 1e-9 * std::max(1.0, std::abs(bound))) out.bounds_met = false;
  }
  out.growth_start = terms;
  for (std::size_t n = terms; n >= 2; --n) {
    if (!(out.term_increments[n - 2] > 0.0)) break;
    out.growth_start = n;
  }
  return out;
}

}  // namespace bumpdirac
