#include <benchmark/benchmark.h>

#include "popphase/dp_sampler.hpp"
#include "popphase/hdp_sampler.hpp"
#include "popphase/partition_ligation.hpp"
#include "popphase/synthgen.hpp"

using namespace popphase;

namespace {

std::pair<Dataset, GroundTruth> protocol_data(int loci, double theta) {
  SimSpec spec;
  spec.n_loci = loci;
  spec.theta = theta;
  spec.seed = 1337;
  return generate(spec);
}

void BM_HdpSweep(benchmark::State& state) {
  auto [data, truth] = protocol_data(static_cast<int>(state.range(0)), 0.01);
  HDPConfig cfg;
  SamplerState st = init_state(data, 1.0, 1.0, 1);
  Rng rng(2);
  for (auto _ : state) {
    hdp_gibbs_sweep(st, data, cfg, rng);
    benchmark::DoNotOptimize(st.urn.n.data());
  }
}
BENCHMARK(BM_HdpSweep)->Arg(10)->Arg(30);

void BM_DpSweep(benchmark::State& state) {
  auto [data, truth] = protocol_data(10, 0.01);
  const Dataset pooled = pool_populations(data);
  DPConfig cfg;
  SamplerState st = init_state(pooled, 1.0, 1.0, 1);
  Rng rng(2);
  for (auto _ : state) {
    dp_gibbs_sweep(st, pooled, cfg, rng);
    benchmark::DoNotOptimize(st.urn.n.data());
  }
}
BENCHMARK(BM_DpSweep);

void BM_AssignmentWeights(benchmark::State& state) {
  auto [data, truth] = protocol_data(10, 0.05);
  HDPConfig cfg;
  SamplerState st = init_state(data, 1.0, 1.0, 1);
  Rng rng(2);
  for (int s = 0; s < 50; ++s) hdp_gibbs_sweep(st, data, cfg, rng);
  const Haplotype h = st.haplotype[0][0][0];
  st.detach_instance_stats(st.assignment[0][0][0], h);
  st.detach_urn(0, st.assignment[0][0][0]);
  st.assignment[0][0][0] = -1;
  for (auto _ : state) {
    auto w = assignment_weights(st, data, cfg.hp, true, 0, 0, 0);
    benchmark::DoNotOptimize(w.data());
  }
}
BENCHMARK(BM_AssignmentWeights);

void BM_CollapsedMarginal(benchmark::State& state) {
  MutationStats s{1200, 17};
  for (auto _ : state) {
    const double v = log_collapsed_h_marginal(s, 1.0, 19.0, 2);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_CollapsedMarginal);

void BM_Ligate(benchmark::State& state) {
  auto [data, truth] = protocol_data(20, 0.01);
  HDPConfig cfg;
  cfg.burnin = 200;
  cfg.samples = 200;
  LigationConfig lig;
  lig.block_length = 10;
  const auto blocks = phase_atomic(data, cfg, lig);
  for (auto _ : state) {
    Rng rng(7);
    Block b = ligate(blocks[0], blocks[1], 0, data, lig, rng);
    benchmark::DoNotOptimize(b.pool.data());
  }
}
BENCHMARK(BM_Ligate);

}  // namespace

BENCHMARK_MAIN();
