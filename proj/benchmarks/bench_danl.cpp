#include <benchmark/benchmark.h>

#include <memory>

#include "danl/baselines.hpp"
#include "danl/data.hpp"
#include "danl/linalg.hpp"
#include "danl/loss.hpp"
#include "danl/protocol.hpp"
#include "danl/rng.hpp"

using namespace danl;

namespace {

SymMatrix random_sym(int d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> raw(static_cast<std::size_t>(d) * d);
  for (auto& v : raw) v = rng.normal();
  return SymMatrix::from_dense(d, raw);
}

SymMatrix random_spd(int d, std::uint64_t seed) {
  SymMatrix m = random_sym(d, seed);
  SymMatrix shifted = SymMatrix::identity(d);
  shifted.scale(static_cast<double>(d));
  shifted.add_scaled(m, 1.0);
  return shifted;
}

struct Workers {
  std::vector<std::unique_ptr<Objective>> owned;
  std::vector<const Objective*> ptrs;
  std::unique_ptr<GlobalObjective> global;
};

Workers make_workers(int d, int n, int m_total) {
  Workers w;
  const Dataset ds = synth_logistic(d, m_total, 42);
  for (const Shard& s : shard_dataset(ds, n, 42))
    w.owned.push_back(
        std::make_unique<LogisticShardObjective>(s, LossConfig{1e-4, d}));
  for (const auto& o : w.owned) w.ptrs.push_back(o.get());
  w.global = std::make_unique<GlobalObjective>(w.ptrs);
  return w;
}

}  // namespace

static void BM_SymEig(benchmark::State& state) {
  const SymMatrix a = random_sym(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    auto eig = sym_eig(a);
    benchmark::DoNotOptimize(eig);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SymEig)->RangeMultiplier(2)->Range(16, 256)->Complexity();

static void BM_ProjectPsd(benchmark::State& state) {
  const SymMatrix a = random_sym(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) {
    auto p = project_psd(a, 0.5);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_ProjectPsd)->Arg(32)->Arg(128);

static void BM_FactorSpd(benchmark::State& state) {
  const SymMatrix h = random_spd(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) {
    auto f = factor_spd(h);
    benchmark::DoNotOptimize(f);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FactorSpd)->RangeMultiplier(2)->Range(16, 512)->Complexity();

static void BM_Solve(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const SpdFactorization f = factor_spd(random_spd(d, 4));
  Rng rng(5);
  ModelVector g(d);
  for (auto& v : g) v = rng.normal();
  for (auto _ : state) {
    auto x = f.solve(g);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_Solve)->Arg(128)->Arg(512);

static void BM_LossGrad(benchmark::State& state) {
  const int d = 123;
  const Dataset ds = synth_logistic(d, static_cast<int>(state.range(0)), 7);
  const Shard shard{ds.samples, d, 0};
  const LossConfig cfg{1e-4, d};
  const ModelVector w(d, 0.1);
  for (auto _ : state) {
    auto g = loss_grad(w, shard, cfg);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_LossGrad)->Arg(200)->Arg(2000);

static void BM_LossHess(benchmark::State& state) {
  const int d = 123;
  const Dataset ds = synth_logistic(d, 200, 8);
  const Shard shard{ds.samples, d, 0};
  const LossConfig cfg{1e-4, d};
  const ModelVector w(d, 0.1);
  for (auto _ : state) {
    auto h = loss_hess(w, shard, cfg);
    benchmark::DoNotOptimize(h);
  }
}
BENCHMARK(BM_LossHess);

static void BM_Phase1(benchmark::State& state) {
  Workers w = make_workers(30, 10, 2000);
  const ModelVector w0(30, 0.0);
  const RegionPartition partition = partition_regions(30, 4);
  for (auto _ : state) {
    auto s = phase1_init(w.ptrs, w0, partition, ProtocolOptions{5e-7, false});
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Phase1);

static void BM_FullRound(benchmark::State& state) {
  Workers w = make_workers(30, 10, 2000);
  const RegionPartition partition = partition_regions(30, 4);
  ServerState st =
      phase1_init(w.ptrs, ModelVector(30, 0.0), partition, {5e-7, false});
  const Budget budget{3, 4, 0};
  int t = 0;
  for (auto _ : state) {
    ++t;
    const MaskAssignment masks =
        generate_masks(t, 10, 4, budget, st.ledger, 42);
    std::vector<GradientReport> reports;
    for (int i = 0; i < 10; ++i)
      if (!masks.regions_per_worker[i].empty())
        reports.push_back(worker_round(*w.ptrs[i], st.w,
                                       masks.regions_per_worker[i], partition,
                                       i, st.round));
    const ModelVector grad = server_aggregate(st, reports);
    server_update(st, grad);
    update_ledger(st.ledger, masks);
    benchmark::DoNotOptimize(st.w.data());
  }
}
BENCHMARK(BM_FullRound);

BENCHMARK_MAIN();
