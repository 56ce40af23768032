#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "danl/vec.hpp"

namespace danl {

/// Q disjoint contiguous index blocks covering [0, d). The first d mod Q
/// blocks hold ⌈d/Q⌉ indices, the rest ⌊d/Q⌋.
struct RegionPartition {
  int dim = 0;
  std::vector<std::pair<int, int>> ranges;  // [begin, end) per region

  int num_regions() const { return static_cast<int>(ranges.size()); }
  int region_size(int q) const { return ranges[q].second - ranges[q].first; }
};

RegionPartition partition_regions(int d, int q_regions);

/// Per-round coverage budget. Lower bounds are enforced per round, which
/// implies the whole-run statistics ψ* ≥ psi_min and S* ≥ s_min exactly.
struct Budget {
  int psi_min = 1;    // minimum workers per trained region
  int s_min = 1;      // minimum trained regions per round
  int gamma_max = 0;  // staleness cap; 0 = unbounded

  bool unbounded_staleness() const { return gamma_max <= 0; }
};

/// Round t's masks: the region subset τᵢᵗ each worker trains.
struct MaskAssignment {
  int round = 0;
  std::vector<std::vector<int>> regions_per_worker;  // sorted region ids

  Mask worker_mask(int worker, const RegionPartition& partition) const;
  std::vector<int> trained_regions() const;            // 𝒜ᵗ, sorted
  std::vector<int> workers_for_region(int q) const;    // 𝒞ᵗ'ᑫ, sorted
};

/// Server-side record of which (worker, region) pairs trained when.
/// Round 0 stands for Phase I, where every pair is initialized from a full
/// gradient and therefore counts as trained.
class CoverageLedger {
 public:
  CoverageLedger() = default;
  CoverageLedger(int n_workers, int n_regions);

  int n_workers() const { return n_workers_; }
  int n_regions() const { return n_regions_; }
  int round() const { return round_; }
  int last_trained(int worker, int region) const {
    return last_trained_[worker][region];
  }
  // Staleness reading t − last_trained at the current round.
  int staleness(int worker, int region) const {
    return round_ - last_trained_[worker][region];
  }

  struct RoundEntry {
    MaskAssignment assignment;
    int gamma_after = 0;  // max staleness over all pairs once the round landed
  };
  const std::vector<RoundEntry>& history() const { return history_; }

  void apply(const MaskAssignment& assignment);

 private:
  int n_workers_ = 0;
  int n_regions_ = 0;
  int round_ = 0;
  std::vector<std::vector<int>> last_trained_;
  std::vector<RoundEntry> history_;
};

/// Draws round t's masks: a uniform s_min-subset of regions, a uniform
/// psi_min-subset of workers per trained region, then any pair at its
/// staleness deadline is force-included and forced regions are topped up
/// to psi_min workers. Pure in (ledger, seed); throws NumericalError when
/// the budget is infeasible, naming the violated constraint.
MaskAssignment generate_masks(int t, int n_workers, int n_regions,
                              const Budget& budget, const CoverageLedger& ledger,
                              std::uint64_t seed);

/// Advances the ledger by one round (assignment round must be ledger round+1).
void update_ledger(CoverageLedger& ledger, const MaskAssignment& assignment);

struct CoverageStats {
  int psi_star = 0;             // min over (t, q ∈ 𝒜ᵗ) of |𝒞ᵗ'ᑫ|
  int s_star = 0;               // min over t of |𝒜ᵗ|
  std::vector<int> gamma_t;     // per-round max staleness
};

CoverageStats coverage_stats(const CoverageLedger& ledger);

/// Audit export: one `round,worker,<bitset>` row per (round, worker), the
/// bitset being region-major 0/1 characters.
void write_mask_history_csv(const CoverageLedger& ledger, std::ostream& out);

}  // namespace danl
