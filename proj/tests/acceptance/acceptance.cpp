// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset; no arguments runs all of them.

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "bumpdirac/angular.hpp"
#include "bumpdirac/coefficients.hpp"
#include "bumpdirac/construction.hpp"
#include "bumpdirac/ode.hpp"
#include "bumpdirac/pruefer.hpp"
#include "bumpdirac/spectral.hpp"

using namespace bumpdirac;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct RandomRect {
  double height, width, lambda;
};

// H in [0, 2], alpha in [0.2, 2], lambda in +-[1.1, 5] with |lambda - H -+ 1| > 0.05.
std::vector<RandomRect> rectangle_corpus(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> h(0.0, 2.0), w(0.2, 2.0), l(1.1, 5.0), coin(0.0, 1.0);
  std::vector<RandomRect> out;
  while (out.size() < n) {
    const double height = h(rng), width = w(rng);
    const double lambda = (coin(rng) < 0.5 ? -1.0 : 1.0) * l(rng);
    if (std::abs(lambda - height - 1.0) <= 0.05 || std::abs(lambda - height + 1.0) <= 0.05) continue;
    out.push_back({height, width, lambda});
  }
  return out;
}

BumpProfile profile_by_index(int i, double width) {
  switch (i % 4) {
    case 0:
      return BumpProfile::rectangular(width);
    case 1:
      return BumpProfile::raised_cosine(width);
    case 2:
      return BumpProfile::triangular(width);
    default: {
      const std::vector<double> samples{0.2, 1.0, 0.6, 1.4, 0.3};
      return normalize_profile(samples, width);
    }
  }
}

BumpPotential mixed_chain(std::size_t bumps, double eta) {
  std::vector<Bump> list;
  std::vector<double> distances;
  for (std::size_t j = 0; j < bumps; ++j) {
    const double width = 0.6 + 0.3 * static_cast<double>(j % 3);
    list.push_back({0.4 + 0.35 * static_cast<double>((j * 7) % 5), profile_by_index(static_cast<int>(j), width)});
    distances.push_back(2.0 + 1.5 * static_cast<double>(j));
  }
  return BumpPotential(std::move(list), std::move(distances), eta);
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

// n/2 nodes on each of [-hi, -lo] and [lo, hi].
std::vector<double> symmetric_nodes(double lo, double hi, std::size_t n) {
  auto pos = linspace(lo, hi, n / 2);
  std::vector<double> out;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) out.push_back(-*it);
  out.insert(out.end(), pos.begin(), pos.end());
  return out;
}

Outcome criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& c : rectangle_corpus(200, 11)) {
    const SystemCoefficients coeffs{[h = c.height](double) { return h; }, c.lambda, 0};
    worst = std::max(worst, max_abs_difference(integrate_fundamental(coeffs, 0.0, c.width).m,
                                               closed_form_rectangular(c.height, c.width, c.lambda).m));
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-9 && t < 10.0, "max entry difference " + num(worst) + " (limit 1e-9), " + num(t) + " s"};
}

Outcome criterion_2() {
  double worst = 0.0;
  for (const auto& c : rectangle_corpus(200, 11)) {
    const auto param = SpectralParam::from_lambda(c.lambda);
    const SystemCoefficients coeffs{[h = c.height](double) { return h; }, c.lambda, 0};
    for (const auto& transfer :
         {integrate_fundamental(coeffs, 0.0, c.width), closed_form_rectangular(c.height, c.width, c.lambda)}) {
      const auto abc = abc_from_transfer(transfer, param);
      worst = std::max(worst, std::abs(abc.mean * abc.mean - abc.cos_part * abc.cos_part -
                                       abc.sin_part * abc.sin_part - 1.0));
    }
  }
  return {worst <= 1e-9, "max |A^2 - B^2 - C^2 - 1| = " + num(worst) + " (limit 1e-9)"};
}

Outcome criterion_3() {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> h(0.05, 2.0), w(0.2, 2.0);
  const std::vector<double> kappas{-2.5, -0.8, 0.6, 1.3, 3.0};
  double worst_f = 0.0, worst_log = 0.0;
  for (int b = 0; b < 50; ++b) {
    const double width = w(rng);
    const Bump bump{h(rng), profile_by_index(b, width)};
    for (double kappa : kappas) {
      const auto param = SpectralParam::from_kappa(kappa);
      const auto abc = abc_from_transfer(bump_transfer(bump, 0.0, param.lambda()), param);
      const auto avg = period_averages(abc);
      worst_f = std::max(worst_f, std::abs(avg.factor - 1.0));
      worst_log = std::max(worst_log, std::abs(avg.log_factor - std::log(2.0 / (abc.mean + 1.0))));
    }
  }
  return {worst_f <= 1e-9 && worst_log <= 1e-9,
          "max |mean f - 1| = " + num(worst_f) + ", max |mean log f - log(2/(A+1))| = " + num(worst_log) +
              " (limit 1e-9)"};
}

Outcome criterion_4() {
  double largest = -INFINITY;
  for (double kappa : symmetric_nodes(1.05, 3.0, 200)) {
    const auto param = SpectralParam::from_kappa(kappa);
    const auto abc = abc_from_transfer(closed_form_rectangular(1.0, 1.0, param.lambda()), param);
    largest = std::max(largest, mean_log_factor(abc));
  }
  return {largest <= -1e-12, "max m over 200 nodes = " + num(largest) + " (must be <= -1e-12)"};
}

Outcome criterion_5() {
  const auto kappas = symmetric_nodes(0.25, 3.0, 100);
  double worst = 0.0;
  std::string per;
  for (std::size_t bumps : {0u, 1u, 3u, 6u}) {
    const auto q = mixed_chain(bumps, 0.4);
    const auto product = density_profile(q, kappas, DensityRoute::product);
    const auto direct = density_profile(q, kappas, DensityRoute::direct);
    double w = 0.0;
    for (std::size_t i = 0; i < kappas.size(); ++i)
      w = std::max(w, std::abs(product.densities[i] - direct.densities[i]) / direct.densities[i]);
    per += " " + std::to_string(bumps) + ":" + num(w);
    worst = std::max(worst, w);
  }
  return {worst <= 1e-8, "max relative difference " + num(worst) + " (limit 1e-8); by bump count" + per};
}

Outcome criterion_6() {
  const auto t0 = std::chrono::steady_clock::now();
  const double l1 = lambda_of_kappa(1.0), l2 = lambda_of_kappa(2.0);
  double worst = 0.0;
  std::string per;
  for (std::size_t bumps : {0u, 3u}) {
    const auto q = mixed_chain(bumps, 0.0);
    for (double b : {100.0, 200.0, 400.0}) {
      const long count = count_eigenvalues_regular(q, b, l1, l2);
      const double dev = std::abs(static_cast<double>(count) - b / std::numbers::pi);
      per += " " + std::to_string(bumps) + "/" + std::to_string(static_cast<int>(b)) + ":" + std::to_string(count);
      worst = std::max(worst, dev);
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 3.0 && t < 60.0,
          "max |N_b - b/pi| = " + num(worst) + " (limit 3), " + num(t) + " s; counts" + per};
}

Outcome criterion_7() {
  const auto param = SpectralParam::from_lambda(2.0);
  const BumpPotential free({}, {}, 0.0);
  const double r2 = std::exp(2.0 * boundary_state(0.0, param).log_radius);
  const double target = r2 * param.lambda() / (param.lambda() + 1.0);
  const double e100 = std::abs(norming_integral(free, param, 100.0) / 100.0 - target);
  const double e200 = std::abs(norming_integral(free, param, 200.0) / 200.0 - target);
  const double ratio = e100 / e200;
  return {ratio >= 1.4 && ratio <= 2.6,
          "errors " + num(e100) + " -> " + num(e200) + ", ratio " + num(ratio) + " (must lie in [1.4, 2.6])"};
}

Outcome criterion_8() {
  const std::vector<double> heights{1e-1, 3e-2, 1e-2, 3e-3};
  StepControl tight;
  tight.tolerance = 1e-13;
  double min_a = INFINITY, min_m = INFINITY, min_m_quarter = INFINITY;
  for (int shape = 0; shape < 2; ++shape) {
    const BumpProfile profile = shape == 0 ? BumpProfile::rectangular(1.0) : BumpProfile::raised_cosine(1.0);
    for (double kappa : {-1.5, 0.7, 1.0, 2.0}) {
      const auto param = SpectralParam::from_kappa(kappa);
      std::vector<double> da, dm, dq;
      for (double h : heights) {
        const auto transfer = shape == 0 ? closed_form_rectangular(h, 1.0, param.lambda())
                                         : bump_transfer(Bump{h, profile}, 0.0, param.lambda(), 0, tight);
        const auto exact = abc_from_transfer(transfer, param);
        const auto asym = abc_asymptotic(profile, 0.0, param, h);
        const double m = mean_log_factor(exact);
        da.push_back(std::abs(exact.mean - asym.mean));
        dm.push_back(std::abs(m + 0.5 * h * h * asym.kernel));
        dq.push_back(std::abs(m - asym.mean_log));
      }
      min_a = std::min(min_a, loglog_slope(heights, da));
      min_m = std::min(min_m, loglog_slope(heights, dm));
      min_m_quarter = std::min(min_m_quarter, loglog_slope(heights, dq));
    }
  }
  return {min_a >= 2.7 && min_m >= 2.7,
          "min slope |A - A_asym| = " + num(min_a) + ", min slope |m + H^2 W/2| = " + num(min_m) +
              " (both must be >= 2.7); diagnostic: min slope |m + H^2 W/4| = " + num(min_m_quarter)};
}

Outcome criterion_9() {
  const auto param = SpectralParam::from_kappa(1.0);
  std::vector<Bump> bumps;
  for (int j = 1; j <= 1000; ++j) bumps.push_back({1.0 / std::sqrt(static_cast<double>(j)), BumpProfile::rectangular(1.0)});
  const auto sums = divergence_partial_sums(bumps, param);
  const double is = (1.0 - std::sin(2.0) / 2.0) / 2.0;  // int_0^1 sin^2 s ds
  const double ic = (1.0 + std::sin(2.0) / 2.0) / 2.0;  // int_0^1 cos^2 s ds
  bool pass = true;
  std::string detail;
  for (std::size_t n : {100u, 1000u}) {
    const double bound = 2.0 * is * ic * (std::log(static_cast<double>(n)) - 1.0);
    pass = pass && sums[n - 1] > bound;
    detail += "n=" + std::to_string(n) + ": sum " + num(sums[n - 1]) + " vs bound " + num(bound) + "; ";
  }
  return {pass, detail};
}

Outcome criterion_10() {
  const auto t0 = std::chrono::steady_clock::now();
  ConstructionConfig config;
  config.bumps.mode = HeightMode::inverse_sqrt;
  config.bumps.height = 1.0;
  config.bumps.profile = BumpProfile::rectangular(1.0);
  config.epsilon = {EpsilonMode::geometric, 0.5, 0.5, 2.0};
  config.growth.mode = GrowthMode::geometric;
  config.growth.scale = 4.0;
  config.growth.base = 2.0;
  config.stages = 3;
  config.bumps_per_stage = 2;
  config.fixed_thresholds = {config.epsilon(1) / 3.0};  // stage-1 threshold eps_1 / |Xi_1|
  const auto result = build_pearson_sequence(config);
  const double t = seconds_since(t0);

  bool gaps_ok = result.complete;
  bool s_ok = result.complete;
  bool fixed_ok = result.complete;
  std::string detail;
  double previous = INFINITY;
  for (const auto& s : result.stages) {
    double ratio = 0.0;
    for (std::size_t i = 0; i < s.gaps.size(); ++i) {
      gaps_ok = gaps_ok && s.gaps[i] < s.budgets[i];
      ratio = std::max(ratio, s.gaps[i] / s.budgets[i]);
    }
    s_ok = s_ok && s.s_measure < s.epsilon;
    fixed_ok = fixed_ok && s.fixed_measures[0] <= previous;
    previous = s.fixed_measures[0];
    detail += "stage " + std::to_string(s.stage) + ": max gap/budget " +
              num(ratio) + ", |S_n| " +
              num(s.s_measure) + " vs eps " + num(s.epsilon) + ", fixed-threshold |S| " +
              num(s.fixed_measures[0]) + "; ";
  }
  detail += "gaps " + std::string(gaps_ok ? "ok" : "FAIL") + ", |S_n| < eps_n " + (s_ok ? "ok" : "FAIL") +
            ", fixed-threshold monotone " + (fixed_ok ? "ok" : "FAIL") + ", " + num(t) + " s";
  if (!result.complete) detail += "; " + result.failure;
  return {gaps_ok && s_ok && fixed_ok && t < 300.0, detail};
}

Outcome criterion_11() {
  // Bessel residual against the 1/r form, with a Richardson central difference.
  double residual = 0.0;
  for (int k : {-1, 1, 2}) {
    for (double kappa : {0.8, 1.7}) {
      const auto param = SpectralParam::from_kappa(kappa);
      const double lambda = param.lambda();
      for (double r : linspace(0.1, 10.0, 200)) {
        auto pick = [&](double x, int which) {
          const auto s = free_solutions(k, param, x);
          return which == 0 ? s.regular : s.singular;
        };
        for (int which = 0; which < 2; ++which) {
          const double h = 1e-3 * std::max(r, 0.1);
          auto derivative = [&](double step) {
            const Vec2 p = pick(r + step, which), m = pick(r - step, which);
            return Vec2{(p[0] - m[0]) / (2 * step), (p[1] - m[1]) / (2 * step)};
          };
          const Vec2 d1 = derivative(h), d2 = derivative(h / 2);
          const Vec2 d{(4 * d2[0] - d1[0]) / 3, (4 * d2[1] - d1[1]) / 3};
          const Vec2 v = pick(r, which);
          const double scale = std::max({1.0, std::abs(v[0]), std::abs(v[1])});
          const double e0 = d[0] - (-k / r * v[0] + (1.0 + lambda) * v[1]);
          const double e1 = d[1] - ((1.0 - lambda) * v[0] + k / r * v[1]);
          residual = std::max(residual, std::max(std::abs(e0), std::abs(e1)) / scale);
        }
      }
    }
  }

  double orthogonality = 0.0, bound_ratio = 0.0;
  for (int k : {-3, -1, 1, 2, 4}) {
    for (double r : linspace(0.05, 40.0, 4000)) {
      const Matrix2 a = transform_matrix(k, r);
      orthogonality = std::max(orthogonality, max_abs_difference(a.transposed() * a, Matrix2::identity()));
    }
    for (double kappa : {-2.0, -0.5, 0.4, 1.0, 3.0}) {
      const auto param = SpectralParam::from_kappa(kappa);
      const auto bounds = channel_constants(k, param);
      for (double r : linspace(1.0, 60.0, 2000))
        for (double angle : linspace(0.0, std::numbers::pi, 17)) {
          const auto terms = channel_terms(k, param, r, angle);
          bound_ratio = std::max({bound_ratio, std::abs(terms.radial) * r * r / bounds.radial,
                                  std::abs(terms.angular) * r * r / bounds.angular});
        }
    }
  }

  double closed_form = 0.0;
  for (int k : {-2, 1, 3}) {
    for (double kappa : {-1.2, 0.9, 2.2}) {
      const auto param = SpectralParam::from_kappa(kappa);
      const Bump bump{0.8, BumpProfile::raised_cosine(1.2)};
      const auto abc = abc_from_transfer(bump_transfer(bump, 0.0, param.lambda()), param);
      const auto factor = ftilde_mtilde(abc, k, param, 2.0, 9.0);
      for (double z : {0.0, 0.7, 2.1}) {
        const auto avg = period_averages(factor, z);
        closed_form = std::max({closed_form, std::abs(avg.factor - std::exp(-2.0 * factor.weight)),
                                std::abs(avg.log_factor - factor.mtilde)});
      }
    }
  }

  double routes = 0.0;
  const BumpPotential q({{0.9, BumpProfile::rectangular(1.0)}, {0.6, BumpProfile::raised_cosine(1.5)},
                         {1.1, BumpProfile::triangular(0.8)}},
                        {3.0, 4.0, 6.0}, 0.3);
  for (int k : {-1, 1, 2}) {
    for (double kappa : symmetric_nodes(0.5, 2.5, 20)) {
      const auto param = SpectralParam::from_kappa(kappa);
      ChannelDensityOptions product, direct;
      direct.route = DensityRoute::direct;
      const double a = density_k(q, param, k, product);
      const double b = density_k(q, param, k, direct);
      routes = std::max(routes, std::abs(a - b) / b);
    }
  }
  const bool pass = residual < 1e-8 && orthogonality <= 1e-12 && bound_ratio < 1.0 && closed_form <= 1e-9 &&
                    routes <= 1e-7;
  return {pass, "Bessel residual " + num(residual) + " (< 1e-8), |A^T A - I| " + num(orthogonality) +
                    " (<= 1e-12), max |F|,|G| / bound " + num(bound_ratio) + " (< 1), f~/m~ closed form " +
                    num(closed_form) + " (<= 1e-9), k-density routes " + num(routes) + " (<= 1e-7)"};
}

Outcome criterion_12() {
  const std::complex<double> lambda(2.0, 1.0);
  GreenOptions options;
  options.nodes = 2000;
  const double coarse = greens_hs_norm(1, lambda, options);
  options.nodes = 4000;
  const double fine = greens_hs_norm(1, lambda, options);
  options.orientation = KernelOrientation::singular_inner;
  options.nodes = 2000;
  const double bad_coarse = greens_hs_norm(1, lambda, options);
  options.nodes = 4000;
  const double bad_fine = greens_hs_norm(1, lambda, options);
  const double change = std::abs(fine - coarse) / coarse;
  const double growth = (bad_fine - bad_coarse) / bad_coarse;
  return {change < 0.01 && growth > 0.5, "regular kernel " + num(coarse) + " -> " + num(fine) + " (change " +
                                             num(change) + " < 0.01), mis-oriented " + num(bad_coarse) + " -> " +
                                             num(bad_fine) + " (growth " + num(growth) + " > 0.5)"};
}

Outcome criterion_13() {
  using Big = boost::multiprecision::cpp_bin_float_50;
  GrowthSchedule growth;
  growth.mode = GrowthMode::exp_square;
  std::vector<Bump> bumps;
  for (int j = 1; j <= 40; ++j) bumps.push_back({1.0 / std::sqrt(static_cast<double>(j)), BumpProfile::rectangular(1.0)});
  bool pass = true;
  double worst_exact = 0.0, worst_deficit = 0.0;
  std::string detail;
  for (double kappa : {0.25, 1.0, -2.0}) {
    const auto report = no_point_spectrum_certificate(bumps, kappa, growth, 30);
    pass = pass && report.bounds_met && std::abs(report.omega - 1.0) < 1e-12;
    // Direct evaluation of sum_{j<=N} exp(j^2 - 2 j omega / |kappa|) for N <= 5.
    Big sum = 0;
    for (int j = 1; j <= 5; ++j) {
      sum += boost::multiprecision::exp(Big(j * j) - 2 * j * Big(report.omega) / std::abs(kappa));
      const double direct = static_cast<double>(boost::multiprecision::log(sum));
      worst_exact = std::max(worst_exact, std::abs(report.log_partial_sums[j - 1] - direct) /
                                              std::max(1.0, std::abs(direct)));
    }
    for (std::size_t i = 0; i < report.term_increments.size(); ++i) {
      const double n = static_cast<double>(i + 2);
      if (n > report.onset)
        worst_deficit = std::max(worst_deficit, report.increment_bounds[i] - report.partial_sum_increments[i]);
    }
    detail += "kappa " + num(kappa) + ": onset " + num(report.onset) + ", term bounds " +
              (report.bounds_met ? "met" : "MISSED") + "; ";
  }
  pass = pass && worst_exact <= 1e-12;
  detail += "log partial sums vs 50-digit direct (j <= 5): " + num(worst_exact) +
            " (limit 1e-12); largest partial-sum shortfall below the term bound " + num(worst_deficit);
  return {pass, detail};
}

const std::vector<std::function<Outcome()>> kCriteria = {
    criterion_1, criterion_2, criterion_3,  criterion_4,  criterion_5,  criterion_6,  criterion_7,
    criterion_8, criterion_9, criterion_10, criterion_11, criterion_12, criterion_13,
};

const char* kNames[] = {
    "transfer-matrix oracle",       "coefficient identity",     "period averages",
    "m < 0 for identical bumps",    "density route agreement",  "Weyl count",
    "norming-constant limit",       "asymptotic order",         "divergence condition",
    "construction stage contract",  "k-channel invariants",     "Green kernel finiteness",
    "no-point-spectrum certificate",
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (int i = 1; i <= static_cast<int>(kCriteria.size()); ++i) selected.push_back(i);
  int failures = 0;
  for (int c : selected) {
    if (c < 1 || c > static_cast<int>(kCriteria.size())) {
      std::fprintf(stderr, "no criterion %d\n", c);
      return 2;
    }
    Outcome outcome{false, ""};
    try {
      outcome = kCriteria[c - 1]();
    } catch (const std::exception& e) {
      outcome = {false, std::string("error: ") + e.what()};
    }
    std::printf("criterion %2d [%s] %s: %s\n", c, outcome.pass ? "PASS" : "FAIL", kNames[c - 1],
                outcome.detail.c_str());
    std::fflush(stdout);
    failures += outcome.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
