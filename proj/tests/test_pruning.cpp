#include "danl/pruning.hpp"

#include <sstream>

#include "danl/error.hpp"
#include "danl/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace danl;

namespace {

// Drives T rounds of mask generation against a fresh ledger.
std::vector<MaskAssignment> drive(int n, int q, const Budget& budget,
                                  std::uint64_t seed, int rounds,
                                  CoverageLedger* ledger_out = nullptr) {
  CoverageLedger ledger(n, q);
  std::vector<MaskAssignment> history;
  for (int t = 1; t <= rounds; ++t) {
    MaskAssignment a = generate_masks(t, n, q, budget, ledger, seed);
    update_ledger(ledger, a);
    history.push_back(std::move(a));
  }
  if (ledger_out) *ledger_out = ledger;
  return history;
}

}  // namespace

TEST_CASE("partition_regions block sizes") {
  const RegionPartition p8 = partition_regions(8, 4);
  for (int q = 0; q < 4; ++q) CHECK(p8.region_size(q) == 2);

  const RegionPartition p10 = partition_regions(10, 4);
  CHECK(p10.region_size(0) == 3);
  CHECK(p10.region_size(1) == 3);
  CHECK(p10.region_size(2) == 2);
  CHECK(p10.region_size(3) == 2);
  CHECK(p10.ranges[0].first == 0);
  CHECK(p10.ranges[3].second == 10);

  const RegionPartition p1 = partition_regions(5, 1);
  CHECK(p1.ranges[0] == std::pair{0, 5});

  CHECK_THROWS_AS(partition_regions(3, 4), std::invalid_argument);
}

TEST_CASE("partition is a disjoint cover for all shapes") {
  Rng rng(41);
  for (int rep = 0; rep < 200; ++rep) {
    const int d = 1 + static_cast<int>(rng.below(512));
    const int q = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
    const RegionPartition p = partition_regions(d, q);
    REQUIRE(p.num_regions() == q);
    int next = 0;
    for (const auto& [begin, end] : p.ranges) {
      CHECK(begin == next);
      CHECK(end > begin);
      next = end;
    }
    CHECK(next == d);
  }
}

TEST_CASE("full-coverage budget forces every worker onto every region") {
  const int n = 10, q = 4;
  const auto history = drive(n, q, Budget{n, q, 0}, 3, 5);
  for (const auto& a : history)
    for (int i = 0; i < n; ++i)
      CHECK(a.regions_per_worker[i].size() == static_cast<std::size_t>(q));
}

TEST_CASE("psi_min=N, s_min=1 trains one region with all workers") {
  const int n = 10, q = 4;
  const auto history = drive(n, q, Budget{10, 1, 0}, 17, 30);
  for (const auto& a : history) {
    const auto trained = a.trained_regions();
    CHECK(trained.size() >= 1);
    for (int region : trained)
      CHECK(a.workers_for_region(region).size() == 10);
  }
}

TEST_CASE("staleness never exceeds the cap") {
  CoverageLedger ledger;
  drive(10, 4, Budget{1, 1, 2}, 23, 100, &ledger);
  for (const auto& entry : ledger.history()) CHECK(entry.gamma_after <= 2);
}

TEST_CASE("ledger staleness accounting matches the worked example") {
  // Worker 1 trains region 2 in round 2, skips rounds 3 and 4, trains at 5.
  const int n = 2, q = 3;
  CoverageLedger ledger(n, q);
  auto round_with = [&](int t, std::vector<std::vector<int>> regions) {
    MaskAssignment a;
    a.round = t;
    a.regions_per_worker = std::move(regions);
    update_ledger(ledger, a);
  };
  const std::vector<int> all{0, 1, 2};
  round_with(1, {all, all});
  round_with(2, {all, all});
  round_with(3, {all, {0, 1}});
  round_with(4, {all, {0, 1}});
  // Entering round 5, worker 1's region 2 has been untrained for two rounds.
  CHECK(ledger.staleness(1, 2) == 2);
  round_with(5, {all, all});
  CHECK(ledger.staleness(1, 2) == 0);
  CHECK(ledger.history()[3].gamma_after == 2);
  CHECK(ledger.history()[4].gamma_after == 0);

  MaskAssignment skipped;
  skipped.round = 7;  // ledger sits at round 5
  skipped.regions_per_worker = {all, all};
  CHECK_THROWS_AS(update_ledger(ledger, skipped), std::invalid_argument);
}

TEST_CASE("coverage_stats on full coverage") {
  CoverageLedger ledger;
  drive(10, 4, Budget{10, 4, 0}, 1, 5, &ledger);
  const CoverageStats stats = coverage_stats(ledger);
  CHECK(stats.psi_star == 10);
  CHECK(stats.s_star == 4);
  REQUIRE(stats.gamma_t.size() == 5);
  for (int g : stats.gamma_t) CHECK(g == 0);
}

TEST_CASE("coverage_stats takes the minimum over hand-built rounds") {
  // Coverage sizes per round: {3,5}, {4}, {3,3,3} → ψ* = 3, S* = 1.
  CoverageLedger ledger(5, 3);
  auto push = [&](int t, std::vector<std::vector<int>> regions) {
    MaskAssignment a;
    a.round = t;
    a.regions_per_worker = std::move(regions);
    update_ledger(ledger, a);
  };
  push(1, {{0, 1}, {0, 1}, {0, 1}, {1}, {1}});
  push(2, {{0}, {0}, {0}, {0}, {}});
  push(3, {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}, {}, {}});
  const CoverageStats stats = coverage_stats(ledger);
  CHECK(stats.psi_star == 3);
  CHECK(stats.s_star == 1);
}

TEST_CASE("coverage_stats matches the brute-force recomputation") {
  Rng rng(314);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 2 + static_cast<int>(rng.below(10));
    const int q = 2 + static_cast<int>(rng.below(6));
    Budget budget;
    budget.psi_min = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    budget.s_min = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(q)));
    budget.gamma_max = rng.uniform01() < 0.5 ? 0 : 1 + static_cast<int>(rng.below(5));

    CoverageLedger ledger;
    const auto history = drive(n, q, budget, rng.next_u64(), 50, &ledger);
    const CoverageStats stats = coverage_stats(ledger);
    const oracle::BruteStats brute = oracle::brute_coverage(history, n, q);
    CHECK(stats.psi_star == brute.psi_star);
    CHECK(stats.s_star == brute.s_star);
    REQUIRE(stats.gamma_t.size() == brute.gamma_t.size());
    for (std::size_t t = 0; t < stats.gamma_t.size(); ++t)
      CHECK(stats.gamma_t[t] == brute.gamma_t[t]);
  }
}

TEST_CASE("budget guarantees hold for random feasible budgets") {
  Rng rng(271828);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 2 + static_cast<int>(rng.below(11));
    const int q = 2 + static_cast<int>(rng.below(7));
    Budget budget;
    budget.psi_min = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    budget.s_min = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(q)));
    budget.gamma_max =
        rng.uniform01() < 0.3 ? 0 : 1 + static_cast<int>(rng.below(6));

    CoverageLedger ledger;
    drive(n, q, budget, rng.next_u64(), 200, &ledger);
    const CoverageStats stats = coverage_stats(ledger);
    CHECK(stats.psi_star >= budget.psi_min);
    CHECK(stats.s_star >= budget.s_min);
    if (!budget.unbounded_staleness())
      for (int g : stats.gamma_t) CHECK(g <= budget.gamma_max);
  }
}

TEST_CASE("mask histories replay identically per seed") {
  const Budget budget{2, 2, 3};
  const auto a = drive(8, 4, budget, 555, 40);
  const auto b = drive(8, 4, budget, 555, 40);
  const auto c = drive(8, 4, budget, 556, 40);
  REQUIRE(a.size() == b.size());
  bool differs = false;
  for (std::size_t t = 0; t < a.size(); ++t) {
    CHECK(a[t].regions_per_worker == b[t].regions_per_worker);
    if (a[t].regions_per_worker != c[t].regions_per_worker) differs = true;
  }
  CHECK(differs);
}

TEST_CASE("infeasible budgets are rejected by name") {
  CoverageLedger ledger(4, 3);
  CHECK_THROWS_WITH_AS(generate_masks(1, 4, 3, Budget{5, 1, 0}, ledger, 0),
                       doctest::Contains("psi_min"), NumericalError);
  CHECK_THROWS_WITH_AS(generate_masks(1, 4, 3, Budget{1, 4, 0}, ledger, 0),
                       doctest::Contains("s_min"), NumericalError);
}

TEST_CASE("masks expand to the union of region index ranges") {
  const RegionPartition p = partition_regions(10, 4);
  MaskAssignment a;
  a.round = 1;
  a.regions_per_worker = {{0, 2}};
  const Mask mask = a.worker_mask(0, p);
  // Regions 0 = [0,3) and 2 = [6,8).
  const Mask want{1, 1, 1, 0, 0, 0, 1, 1, 0, 0};
  CHECK(mask == want);
}

TEST_CASE("mask history export shape") {
  CoverageLedger ledger;
  drive(3, 4, Budget{1, 2, 0}, 9, 2, &ledger);
  std::ostringstream out;
  write_mask_history_csv(ledger, out);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "round,worker,regions");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line.size() >= 8);  // "t,w,0000"
  }
  CHECK(rows == 2 * 3);
}
