#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "danl/linalg.hpp"
#include "danl/objective.hpp"
#include "danl/pruning.hpp"
#include "danl/vec.hpp"

namespace danl {

/// A worker's round-t upload: gradient fragments for the regions it trained.
struct GradientReport {
  int worker_id = -1;
  int round = 0;
  std::vector<int> regions;                     // sorted ascending
  std::vector<std::vector<double>> fragments;   // aligned with `regions`
};

/// A worker's Phase I upload: full local gradient and Hessian at ω⁰.
struct HessianReport {
  int worker_id = -1;
  ModelVector grad;
  SymMatrix hess;
};

/// Server buffer Θᵢᵗ'ᑫ: each worker's latest gradient fragment per region,
/// with the round it was uploaded. Holds one fragment per (worker, region)
/// from Phase I on.
class StaleFragmentStore {
 public:
  StaleFragmentStore() = default;
  StaleFragmentStore(int n_workers, RegionPartition partition);

  // Phase I: stamp every region of `worker` with round 0.
  void init_full(int worker, const ModelVector& full_grad);
  void refresh(int worker, int region, std::span<const double> values,
               int round);

  std::span<const double> fragment(int worker, int region) const;
  int stamp(int worker, int region) const { return stamps_[worker][region]; }
  int n_workers() const { return static_cast<int>(values_.size()); }
  const RegionPartition& partition() const { return partition_; }

  // Flat per-worker view (regions concatenated in partition order).
  const ModelVector& flat(int worker) const { return values_[worker]; }

 private:
  RegionPartition partition_;
  std::vector<ModelVector> values_;          // [worker], length d
  std::vector<std::vector<int>> stamps_;     // [worker][region]
};

struct ProtocolOptions {
  double mu = 0.0;  // projection floor for [Π]_μ; must be positive
  // Average trained regions over their fresh reporters (1/|𝒞ᵗ'ᑫ|) instead of
  // carrying the Algorithm form (1/N over all stored fragments).
  bool coverage_weighted = false;
};

/// Server state across rounds. `pi_mu_factor` is the factorization of the
/// one-shot projected Hessian [Π]_μ; it is never recomputed.
struct ServerState {
  int round = 0;
  ModelVector w;
  SymMatrix pi;
  SpdFactorization pi_mu_factor;
  RegionPartition partition;
  StaleFragmentStore theta;
  CoverageLedger ledger;
  ProtocolOptions options;
};

HessianReport worker_init(const Objective& objective, const ModelVector& w0,
                          int worker_id);

/// Phase I: aggregate Π = (1/N) Σ ∇²Fᵢ(ω⁰), seed Θᵢ⁰'ᑫ from full gradients,
/// factor [Π]_μ once, and take the first preconditioned step to ω¹.
ServerState phase1_init(const std::vector<const Objective*>& workers,
                        const ModelVector& w0, const RegionPartition& partition,
                        const ProtocolOptions& options);

/// One worker's Phase II round: pruned gradient restricted to its regions.
GradientReport worker_round(const Objective& objective, const ModelVector& w_t,
                            const std::vector<int>& regions,
                            const RegionPartition& partition, int worker_id,
                            int round);

/// Refreshes Θ from the round's reports, then assembles ∇Fᵗ region-wise,
/// summing over workers in ascending id order.
ModelVector server_aggregate(ServerState& state,
                             const std::vector<GradientReport>& reports);

/// ω^{t+1} = ωᵗ − [Π]_μ⁻¹ ∇Fᵗ using the stored factorization.
void server_update(ServerState& state, const ModelVector& grad);

struct RunConfig {
  int n_regions = 4;
  int rounds = 100;  // Phase II rounds T
  Budget budget;
  std::uint64_t seed = 0;
  ProtocolOptions options;
  bool subsampled = false;  // whether workers draw per-round views
};

/// Per-round metrics; `round` 0 is the Phase I record.
struct RoundRecord {
  int round = 0;
  double gap = 0.0;
  double grad_norm = 0.0;
  int regions_trained = 0;
  int min_coverage = 0;
  int gamma_t = 0;
  double elapsed_ms = 0.0;
};

struct RunResult {
  std::vector<RoundRecord> records;
  std::vector<ModelVector> iterates;  // ω⁰, ω¹, …, ω^{T+1}
  ModelVector final_w;
  ServerState state;  // final server state (ledger, Θ, factorization)
};

/// Executes Phase I then T Phase II rounds. Deterministic given the config
/// and seed. `global` and `f_star` define the optimality gap column.
RunResult run(const std::vector<const Objective*>& workers,
              const ModelVector& w0, const Objective& global, double f_star,
              const RunConfig& cfg);

}  // namespace danl
