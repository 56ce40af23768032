#include "danl/pruning.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "danl/error.hpp"
#include "danl/rng.hpp"

namespace danl {

RegionPartition partition_regions(int d, int q_regions) {
  if (d < 1) throw std::invalid_argument("partition_regions: d must be >= 1");
  if (q_regions < 1 || q_regions > d)
    throw std::invalid_argument("partition_regions: need 1 <= Q <= d");
  RegionPartition p;
  p.dim = d;
  const int base = d / q_regions;
  const int extra = d % q_regions;
  int begin = 0;
  for (int q = 0; q < q_regions; ++q) {
    const int len = base + (q < extra ? 1 : 0);
    p.ranges.emplace_back(begin, begin + len);
    begin += len;
  }
  return p;
}

Mask MaskAssignment::worker_mask(int worker,
                                 const RegionPartition& partition) const {
  Mask mask(partition.dim, 0);
  for (int q : regions_per_worker[worker]) {
    const auto [begin, end] = partition.ranges[q];
    for (int j = begin; j < end; ++j) mask[j] = 1;
  }
  return mask;
}

std::vector<int> MaskAssignment::trained_regions() const {
  std::vector<int> out;
  for (const auto& regions : regions_per_worker)
    out.insert(out.end(), regions.begin(), regions.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> MaskAssignment::workers_for_region(int q) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(regions_per_worker.size()); ++i) {
    const auto& regions = regions_per_worker[i];
    if (std::binary_search(regions.begin(), regions.end(), q)) out.push_back(i);
  }
  return out;
}

CoverageLedger::CoverageLedger(int n_workers, int n_regions)
    : n_workers_(n_workers),
      n_regions_(n_regions),
      round_(0),
      last_trained_(n_workers, std::vector<int>(n_regions, 0)) {
  if (n_workers < 1 || n_regions < 1)
    throw std::invalid_argument("CoverageLedger: empty worker or region set");
}

void CoverageLedger::apply(const MaskAssignment& assignment) {
  if (assignment.round != round_ + 1)
    throw std::invalid_argument(
        "CoverageLedger::apply: assignment round " +
        std::to_string(assignment.round) + " does not follow ledger round " +
        std::to_string(round_));
  if (static_cast<int>(assignment.regions_per_worker.size()) != n_workers_)
    throw std::invalid_argument("CoverageLedger::apply: worker count mismatch");

  round_ = assignment.round;
  for (int i = 0; i < n_workers_; ++i)
    for (int q : assignment.regions_per_worker[i]) last_trained_[i][q] = round_;

  int gamma = 0;
  for (int i = 0; i < n_workers_; ++i)
    for (int q = 0; q < n_regions_; ++q)
      gamma = std::max(gamma, round_ - last_trained_[i][q]);
  history_.push_back({assignment, gamma});
}

void update_ledger(CoverageLedger& ledger, const MaskAssignment& assignment) {
  ledger.apply(assignment);
}

MaskAssignment generate_masks(int t, int n_workers, int n_regions,
                              const Budget& budget, const CoverageLedger& ledger,
                              std::uint64_t seed) {
  if (budget.psi_min < 1 || budget.psi_min > n_workers)
    throw NumericalError("generate_masks: infeasible budget: psi_min=" +
                         std::to_string(budget.psi_min) + " with N=" +
                         std::to_string(n_workers));
  if (budget.s_min < 1 || budget.s_min > n_regions)
    throw NumericalError("generate_masks: infeasible budget: s_min=" +
                         std::to_string(budget.s_min) + " with Q=" +
                         std::to_string(n_regions));
  if (ledger.n_workers() != n_workers || ledger.n_regions() != n_regions)
    throw std::invalid_argument("generate_masks: ledger shape mismatch");
  if (t != ledger.round() + 1)
    throw std::invalid_argument("generate_masks: round must be ledger round+1");

  Rng rng(derive_seed(seed, /*stream=*/0x3a5c, static_cast<std::uint64_t>(t)));

  std::vector<int> trained = rng.sample_subset(n_regions, budget.s_min);
  std::vector<std::vector<std::uint8_t>> in_region(
      n_regions, std::vector<std::uint8_t>(n_workers, 0));
  std::vector<std::uint8_t> region_active(n_regions, 0);
  for (int q : trained) {
    region_active[q] = 1;
    for (int i : rng.sample_subset(n_workers, budget.psi_min))
      in_region[q][i] = 1;
  }

  // Force-include pairs whose staleness would exceed gamma_max if skipped.
  if (!budget.unbounded_staleness()) {
    for (int q = 0; q < n_regions; ++q) {
      for (int i = 0; i < n_workers; ++i) {
        if (t - ledger.last_trained(i, q) > budget.gamma_max) {
          region_active[q] = 1;
          in_region[q][i] = 1;
        }
      }
    }
  }

  // Regions opened only by forced pairs still owe psi_min workers.
  MaskAssignment out;
  out.round = t;
  out.regions_per_worker.assign(n_workers, {});
  for (int q = 0; q < n_regions; ++q) {
    if (!region_active[q]) continue;
    int count = 0;
    for (int i = 0; i < n_workers; ++i) count += in_region[q][i];
    if (count < budget.psi_min) {
      std::vector<int> absent;
      for (int i = 0; i < n_workers; ++i)
        if (!in_region[q][i]) absent.push_back(i);
      for (int k : rng.sample_subset(static_cast<int>(absent.size()),
                                     budget.psi_min - count))
        in_region[q][absent[k]] = 1;
    }
    for (int i = 0; i < n_workers; ++i)
      if (in_region[q][i]) out.regions_per_worker[i].push_back(q);
  }
  return out;
}

CoverageStats coverage_stats(const CoverageLedger& ledger) {
  if (ledger.history().empty())
    throw std::invalid_argument("coverage_stats: empty history");
  CoverageStats stats;
  stats.psi_star = ledger.n_workers();
  stats.s_star = ledger.n_regions();
  for (const auto& entry : ledger.history()) {
    const std::vector<int> trained = entry.assignment.trained_regions();
    stats.s_star = std::min(stats.s_star, static_cast<int>(trained.size()));
    for (int q : trained) {
      const auto workers = entry.assignment.workers_for_region(q);
      stats.psi_star =
          std::min(stats.psi_star, static_cast<int>(workers.size()));
    }
    stats.gamma_t.push_back(entry.gamma_after);
  }
  return stats;
}

void write_mask_history_csv(const CoverageLedger& ledger, std::ostream& out) {
  out << "round,worker,regions\n";
  for (const auto& entry : ledger.history()) {
    for (int i = 0; i < ledger.n_workers(); ++i) {
      std::string bits(ledger.n_regions(), '0');
      for (int q : entry.assignment.regions_per_worker[i]) bits[q] = '1';
      out << entry.assignment.round << ',' << i << ',' << bits << '\n';
    }
  }
}

}  // namespace danl
