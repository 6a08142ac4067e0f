#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bumpdirac/angular.hpp"
#include "bumpdirac/errors.hpp"
#include "bumpdirac/potential.hpp"
#include "bumpdirac/spectral.hpp"

namespace bumpdirac {

using Interval = std::pair<double, double>;

// |int_alpha^beta F(kappa) [G(kappa, L kappa) - Gbar(kappa)] dkappa|, Gbar the
// average of G over one period [0, pi) in its second argument.
double averaging_residual(const std::function<double(double)>& weight,
                          const std::function<double(double, double)>& periodic, double frequency, double alpha,
                          double beta);

// exp_square: d_j >= exp((j-1)^2).
enum class GrowthMode { exp_square, geometric, custom };

// Lower bounds for the bump distances d_j (j >= 1).
struct GrowthSchedule {
  GrowthMode mode = GrowthMode::geometric;
  double scale = 4.0;  // geometric: scale * base^(j-1)
  double base = 2.0;
  std::vector<double> custom;

  // log of the floor; always finite, also where the floor itself overflows.
  double log_floor(std::size_t j) const;
  // The floor itself; exponential floors are only materialized for j <= 6.
  double floor(std::size_t j) const;
};

enum class EpsilonMode { geometric, power };

// eps_n = scale * ratio^(n-1) or scale * n^(-exponent).
struct EpsilonSchedule {
  EpsilonMode mode = EpsilonMode::geometric;
  double scale = 1.0;
  double ratio = 0.5;
  double exponent = 2.0;

  // Throws a configuration error unless the series converges.
  void validate() const;
  double operator()(std::size_t n) const;
};

// Xi_n = [-2n, -1/(2n)] and [1/(2n), 2n].
std::vector<Interval> xi_intervals(std::size_t n);

// Measure of the density on [lower, upper]. Channel 0 uses the half-line
// density; other channels use density_k on [1, inf).
double stage_measure(const BumpPotential& potential, double lower, double upper, int channel,
                     const MeasureOptions& options);

struct SelectionOptions {
  double tolerance = 1e-3;
  double floor = 1.0;
  int max_doublings = 20;
  int channel = 0;
  MeasureOptions measure{};
};

struct DistanceSelection {
  double distance = 0.0;
  double gap = 0.0;  // max over the test intervals of |mu_{n+1} - mu_n|
  std::vector<double> interval_gaps;
  std::vector<std::pair<double, double>> scan;  // (candidate distance, gap)
};

class SelectionFailure : public Error {
 public:
  SelectionFailure(const std::string& message, double best_distance, double best_gap);

  double best_distance() const noexcept { return best_distance_; }
  double best_gap() const noexcept { return best_gap_; }

 private:
  double best_distance_;
  double best_gap_;
};

// Scans d = floor * 2^i, i = 0..max_doublings, and returns the first distance
// at which appending `next` moves every test measure by less than the tolerance.
DistanceSelection select_next_distance(const BumpPotential& potential, const Bump& next,
                                       std::span<const Interval> tests, const SelectionOptions& options);

struct ConcentrationOptions {
  double cells_per_unit = 64.0;  // floor; oscillations of the chain raise it
  double variation = 0.1;        // refine until neighbouring nodes differ by less
  int max_depth = 10;
  int channel = 0;
  unsigned threads = 1;
  DensityOptions density{};
};

struct ConcentrationSet {
  std::vector<Interval> intervals;
  double measure = 0.0;    // Lebesgue measure of S
  double threshold = 0.0;
  double xi_measure = 0.0;
  double retained = 0.0;   // density mass on Xi outside S
  bool retention_holds = true;  // retained <= threshold * xi_measure
  std::size_t cells = 0;
};

// Super-level set {kappa in Xi : density > threshold} on an adaptive grid of
// half-open cells decided at their midpoints; ties within 1e-12 count as inside.
ConcentrationSet concentration_set(const BumpPotential& potential, std::span<const Interval> xi, double threshold,
                                   const ConcentrationOptions& options = {});

enum class HeightMode { identical, inverse_sqrt, custom };

// Bump j (j >= 1) of the chain: height per mode on a shared profile.
struct BumpSchedule {
  HeightMode mode = HeightMode::inverse_sqrt;
  double height = 1.0;
  std::vector<double> custom;
  BumpProfile profile = BumpProfile::rectangular(1.0);

  Bump bump(std::size_t j) const;
};

struct ConstructionConfig {
  BumpSchedule bumps{};
  EpsilonSchedule epsilon{};
  GrowthSchedule growth{};
  std::size_t stages = 3;
  std::size_t bumps_per_stage = 2;
  // Each component of Xi_n is split into this many equal test intervals.
  std::size_t tests_per_component = 2;
  // Thresholds tracked on Xi_1 at every stage.
  std::vector<double> fixed_thresholds;
  double boundary_angle = 0.0;
  int channel = 0;
  MeasureOptions measure{};
  ConcentrationOptions concentration{};
  // Called after every placed bump with (bump index, distance, gap).
  std::function<void(std::size_t, double, double)> on_bump;
};

struct ConstructionStage {
  std::size_t stage = 0;
  std::vector<Interval> xi;
  double epsilon = 0.0;
  std::size_t bump_count = 0;
  std::vector<double> distances;
  std::vector<double> gaps;
  std::vector<double> budgets;
  double threshold = 0.0;
  double s_measure = 0.0;
  std::vector<Interval> s_intervals;
  double retained = 0.0;
  std::vector<double> fixed_measures;  // one per fixed threshold, on Xi_1
};

struct ConstructionResult {
  std::vector<ConstructionStage> stages;
  BumpPotential potential;
  bool complete = true;
  std::string failure;
};

// Stage n appends bumps_per_stage bumps; bump i gets the budget eps_n 2^-i on
// every test interval of Xi_n, then S_n is taken at threshold eps_n / |Xi_n|.
ConstructionResult build_pearson_sequence(const ConstructionConfig& config);

struct CertificateReport {
  double omega = 0.0;
  double kappa = 0.0;
  double onset = 0.0;                      // omega / |kappa|
  std::vector<double> log_terms;           // t_j = log floor(d_{j+1}) - 2 j omega / |kappa|, j = 1..N
  std::vector<double> log_partial_sums;    // log sum_{i <= j} exp(t_i)
  std::vector<double> term_increments;     // t_N - t_{N-1}, N = 2..N (index N - 2)
  std::vector<double> increment_bounds;    // (2N - 1) - 2 omega / |kappa| for exponential floors
  std::vector<double> partial_sum_increments;
  bool bounds_met = true;                  // term increments reach their bounds for N > onset
  std::size_t growth_start = 0;            // terms increase from this index on
};

// Lower bound for int R^2 built from the distance floors and
// log R(b_j) >= log R(0) - j omega / |kappa|, omega = sup_j H_j int |W_j|.
CertificateReport no_point_spectrum_certificate(std::span<const Bump> bumps, double kappa,
                                                const GrowthSchedule& growth, std::size_t terms);

}  // namespace bumpdirac
