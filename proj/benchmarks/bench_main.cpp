#include <benchmark/benchmark.h>

#include <vector>

#include "bumpdirac/angular.hpp"
#include "bumpdirac/bessel.hpp"
#include "bumpdirac/ode.hpp"
#include "bumpdirac/pruefer.hpp"
#include "bumpdirac/spectral.hpp"

using namespace bumpdirac;

namespace {

BumpPotential chain(std::size_t n) {
  std::vector<Bump> bumps;
  std::vector<double> distances;
  for (std::size_t j = 1; j <= n; ++j) {
    bumps.push_back({1.0 / std::sqrt(double(j)), BumpProfile::raised_cosine(1.0)});
    distances.push_back(4.0 * double(j));
  }
  return BumpPotential(std::move(bumps), std::move(distances), 0.2);
}

void transfer_rk4(benchmark::State& state) {
  const Bump bump{1.2, BumpProfile::raised_cosine(1.4)};
  for (auto _ : state) benchmark::DoNotOptimize(bump_transfer(bump, 0.0, 2.3));
}
BENCHMARK(transfer_rk4);

void transfer_closed_form(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(closed_form_rectangular(0.8, 1.3, 2.2));
}
BENCHMARK(transfer_closed_form);

void density_sweep(benchmark::State& state) {
  const auto q = chain(static_cast<std::size_t>(state.range(0)));
  std::vector<double> kappas;
  for (int i = 0; i < 256; ++i) kappas.push_back(0.5 + i * (1.5 / 255.0));
  for (auto _ : state) benchmark::DoNotOptimize(density_profile(q, kappas, DensityRoute::product));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(kappas.size()));
}
BENCHMARK(density_sweep)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void pruefer_propagation(benchmark::State& state) {
  const auto q = chain(8);
  const auto p = SpectralParam::from_kappa(1.1);
  const auto start = boundary_state(q.boundary_angle(), p);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_pruefer(q, p, start, q.support_end()));
}
BENCHMARK(pruefer_propagation)->Unit(benchmark::kMicrosecond);

void channel_density(benchmark::State& state) {
  const auto q = chain(4);
  const auto p = SpectralParam::from_kappa(1.1);
  for (auto _ : state) benchmark::DoNotOptimize(density_k(q, p, 2));
}
BENCHMARK(channel_density)->Unit(benchmark::kMicrosecond);

void bessel_half(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bessel_j_half(n, x));
    benchmark::DoNotOptimize(bessel_y_half(n, x));
    x = x < 30.0 ? x + 0.37 : 0.1;
  }
}
BENCHMARK(bessel_half)->Arg(0)->Arg(5)->Arg(20);

}  // namespace
BENCHMARK_MAIN();
