#include <benchmark/benchmark.h>

#include "tcmesh/growth.hpp"
#include "tcmesh/network.hpp"
#include "tcmesh/stats.hpp"
#include "tcmesh/synth.hpp"

using namespace tcmesh;

namespace {

Generated make_data(std::size_t n_suppliers) {
  SynthConfig config;
  config.n_suppliers = n_suppliers;
  config.set_beta(0.7);
  config.sigma_supplier = 0.05;
  config.seed = 42;
  return generate(config);
}

void bm_generate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(make_data(n));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(bm_generate)->Arg(500)->Arg(2000);

void bm_build_network(benchmark::State& state) {
  const auto generated = make_data(static_cast<std::size_t>(state.range(0)));
  const auto dataset = to_dataset(generated);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_network(dataset));
  }
}
BENCHMARK(bm_build_network)->Arg(2000);

void bm_scatter(benchmark::State& state) {
  const auto generated = make_data(2000);
  const auto dataset = to_dataset(generated);
  const auto net = build_network(dataset);
  const auto threads = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_scatter(net, net.suppliers(), Period::second(),
                                           MissingPolicy::drop_renormalize, threads));
  }
}
BENCHMARK(bm_scatter)->Arg(1)->Arg(4);

void bm_degree_fit(benchmark::State& state) {
  Xoshiro256StarStar rng(7);
  const auto degrees = sample_in_degrees(10000, 2.3, 160000, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_ccdf_slope(ccdf_points(degrees), 2, 150));
  }
}
BENCHMARK(bm_degree_fit);

}  // namespace

BENCHMARK_MAIN();
