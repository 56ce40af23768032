#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "danl/baselines.hpp"
#include "danl/config.hpp"
#include "danl/data.hpp"
#include "danl/objective.hpp"
#include "danl/protocol.hpp"

namespace danl {

/// Everything a run (or a sweep of runs) shares: the sharded dataset, the
/// worker objectives, the FedAvg warm start and the Newton reference.
struct ExperimentContext {
  Dataset dataset;
  std::vector<std::unique_ptr<Objective>> owned;
  std::vector<const Objective*> workers;
  std::unique_ptr<GlobalObjective> global;
  ModelVector w0;
  NewtonReference reference;
  double mu = 0.0;
  double mean_shard_size = 0.0;
};

ExperimentContext prepare_experiment(const ExperimentConfig& cfg);

/// One full run with the context's warm start and reference.
RunResult run_with_budget(const ExperimentContext& ctx,
                          const ExperimentConfig& cfg, const Budget& budget);

/// run_experiment = prepare + run with the config's own budget.
RunResult run_experiment(const ExperimentConfig& cfg);

// Trajectory CSV, header pinned to
// `round,gap,grad_norm,regions_trained,min_coverage,gamma_t,elapsed_ms`.
void write_trajectory_csv(const std::vector<RoundRecord>& records,
                          std::ostream& out);

/// First round whose gap is <= threshold, or -1 if never reached.
int rounds_to_threshold(const std::vector<RoundRecord>& records,
                        double threshold);

struct SweepCell {
  std::string scenario;
  int psi_min = 0;
  int s_min = 0;
  int gamma_max = 0;  // 0 = unbounded
  int rounds_to_1e2 = -1;
  int rounds_to_1e4 = -1;
  int rounds_to_1e6 = -1;
};

/// Fig. 1 scenarios: (ψ*=1,S*=4), (ψ*=3,S*=4), (ψ*=10,S*=1), shared warm
/// start and seed, unbounded staleness.
std::vector<SweepCell> sweep_fig1(const ExperimentConfig& base);

/// Fig. 2 grid: S*=4 with (ψ*, γ_max) ∈ {1,2} × {2,4}.
std::vector<SweepCell> sweep_fig2(const ExperimentConfig& base);

void write_sweep_csv(const std::vector<SweepCell>& cells, std::ostream& out);

struct TheoryReport {
  int lemma_trials = 0;
  int lemma_violations = 0;
  std::vector<int> violating_trials;
  // Contraction battery over full-coverage synthetic runs.
  int basin_rounds = 0;        // rounds with gap <= 1e-2 and measurable dist²
  int contracting_rounds = 0;  // of those, rounds with ratio <= 0.5
  double max_ratio = 0.0;      // max squared-distance ratio over basin rounds
  double fraction_contracting() const {
    return basin_rounds == 0
               ? 1.0
               : static_cast<double>(contracting_rounds) / basin_rounds;
  }
};

/// (a) Lemma-style projection battery: random symmetric Π, random Π* with
/// min-eig ≥ μ, asserting ‖[Π]_μ − Π*‖_F ≤ ‖Π − Π*‖_F + 1e-10.
/// (b) Contraction battery on full-coverage synthetic logistic runs.
TheoryReport check_theory(std::uint64_t seed, int trials, int matrix_dim = 20);

void write_theory_report(const TheoryReport& report, std::ostream& out);

/// Sidecar cache for Newton references, keyed by the full objective identity
/// (dataset, dimension, λ, iterations, worker count, shard seed). Plain
/// tab-separated text so any tooling can read it.
class RefCache {
 public:
  static std::string make_key(const ExperimentConfig& cfg,
                              const std::string& source_name, int dim);

  explicit RefCache(std::string path);  // loads if the file exists
  const NewtonReference* find(const std::string& key) const;
  void put(const std::string& key, const NewtonReference& ref);  // saves

 private:
  std::string path_;
  std::vector<std::pair<std::string, NewtonReference>> entries_;
};

}  // namespace danl
