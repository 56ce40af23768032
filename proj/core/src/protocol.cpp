#include "danl/protocol.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "danl/error.hpp"
#include "danl/rng.hpp"

namespace danl {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Seed stream for per-round worker sample draws.
std::uint64_t draw_seed(std::uint64_t base, int round, int worker, int n) {
  return derive_seed(base, 0xd4a0,
                     static_cast<std::uint64_t>(round) * n + worker);
}

}  // namespace

StaleFragmentStore::StaleFragmentStore(int n_workers, RegionPartition partition)
    : partition_(std::move(partition)),
      values_(n_workers, ModelVector(partition_.dim, 0.0)),
      stamps_(n_workers, std::vector<int>(partition_.num_regions(), -1)) {}

void StaleFragmentStore::init_full(int worker, const ModelVector& full_grad) {
  if (full_grad.size() != static_cast<std::size_t>(partition_.dim))
    throw std::invalid_argument("StaleFragmentStore::init_full: bad dimension");
  values_[worker] = full_grad;
  for (int q = 0; q < partition_.num_regions(); ++q) stamps_[worker][q] = 0;
}

void StaleFragmentStore::refresh(int worker, int region,
                                 std::span<const double> values, int round) {
  const auto [begin, end] = partition_.ranges[region];
  if (static_cast<int>(values.size()) != end - begin)
    throw std::invalid_argument(
        "StaleFragmentStore::refresh: fragment length " +
        std::to_string(values.size()) + " does not match region " +
        std::to_string(region) + " size " + std::to_string(end - begin));
  std::copy(values.begin(), values.end(), values_[worker].begin() + begin);
  stamps_[worker][region] = round;
}

std::span<const double> StaleFragmentStore::fragment(int worker,
                                                     int region) const {
  const auto [begin, end] = partition_.ranges[region];
  return {values_[worker].data() + begin, static_cast<std::size_t>(end - begin)};
}

HessianReport worker_init(const Objective& objective, const ModelVector& w0,
                          int worker_id) {
  return {worker_id, objective.grad(w0), objective.hess(w0)};
}

ServerState phase1_init(const std::vector<const Objective*>& workers,
                        const ModelVector& w0, const RegionPartition& partition,
                        const ProtocolOptions& options) {
  const int n = static_cast<int>(workers.size());
  if (n < 1) throw std::invalid_argument("phase1_init: no workers");
  if (!(options.mu > 0.0))
    throw NumericalError("phase1_init: projection floor mu must be positive, got " +
                         std::to_string(options.mu));
  const int d = partition.dim;
  if (w0.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("phase1_init: w0 dimension mismatch");

  ServerState state;
  state.partition = partition;
  state.options = options;
  state.theta = StaleFragmentStore(n, partition);
  state.ledger = CoverageLedger(n, partition.num_regions());

  SymMatrix pi(d);
  ModelVector grad_sum(d, 0.0);
  for (int i = 0; i < n; ++i) {
    const HessianReport report = worker_init(*workers[i], w0, i);
    pi.add_scaled(report.hess, 1.0);
    for (int j = 0; j < d; ++j) grad_sum[j] += report.grad[j];
    state.theta.init_full(i, report.grad);
  }
  pi.scale(1.0 / static_cast<double>(n));
  for (int j = 0; j < d; ++j) grad_sum[j] /= static_cast<double>(n);

  state.pi = pi;
  state.pi_mu_factor = factor_spd(project_psd(pi, options.mu));

  const ModelVector step = state.pi_mu_factor.solve(grad_sum);
  state.w = w0;
  for (int j = 0; j < d; ++j) state.w[j] -= step[j];
  state.round = 1;
  return state;
}

GradientReport worker_round(const Objective& objective, const ModelVector& w_t,
                            const std::vector<int>& regions,
                            const RegionPartition& partition, int worker_id,
                            int round) {
  GradientReport report;
  report.worker_id = worker_id;
  report.round = round;
  report.regions = regions;
  if (regions.empty()) return report;  // idle this round

  Mask mask(partition.dim, 0);
  for (int q : regions) {
    const auto [begin, end] = partition.ranges[q];
    for (int j = begin; j < end; ++j) mask[j] = 1;
  }
  const ModelVector g = masked_grad(objective, w_t, mask);
  report.fragments.reserve(regions.size());
  for (int q : regions) {
    const auto [begin, end] = partition.ranges[q];
    report.fragments.emplace_back(g.begin() + begin, g.begin() + end);
  }
  return report;
}

ModelVector server_aggregate(ServerState& state,
                             const std::vector<GradientReport>& reports) {
  const int n = state.theta.n_workers();
  const int n_regions = state.partition.num_regions();

  std::vector<std::uint8_t> seen(n, 0);
  for (const GradientReport& r : reports) {
    if (r.worker_id < 0 || r.worker_id >= n)
      throw std::invalid_argument("server_aggregate: unknown worker id " +
                                  std::to_string(r.worker_id));
    if (seen[r.worker_id])
      throw std::invalid_argument("server_aggregate: duplicate report from worker " +
                                  std::to_string(r.worker_id));
    seen[r.worker_id] = 1;
    if (r.round != state.round)
      throw std::invalid_argument("server_aggregate: report round " +
                                  std::to_string(r.round) +
                                  " does not match server round " +
                                  std::to_string(state.round));
    if (r.regions.size() != r.fragments.size())
      throw std::invalid_argument("server_aggregate: fragments missing for regions");
  }

  // Θᵢᵗ'ᑫ ← fresh fragment for reporters, carried over otherwise.
  std::vector<std::vector<int>> fresh(n_regions);
  for (const GradientReport& r : reports) {
    for (std::size_t k = 0; k < r.regions.size(); ++k) {
      state.theta.refresh(r.worker_id, r.regions[k], r.fragments[k], r.round);
      fresh[r.regions[k]].push_back(r.worker_id);
    }
  }
  for (auto& ids : fresh) std::sort(ids.begin(), ids.end());

  ModelVector out(state.partition.dim, 0.0);
  for (int q = 0; q < n_regions; ++q) {
    const auto [begin, end] = state.partition.ranges[q];
    if (state.options.coverage_weighted && !fresh[q].empty()) {
      const double c = static_cast<double>(fresh[q].size());
      for (int j = begin; j < end; ++j) {
        double s = 0.0;
        for (int i : fresh[q]) s += state.theta.flat(i)[j];
        out[j] = s / c;
      }
    } else {
      for (int j = begin; j < end; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += state.theta.flat(i)[j];
        out[j] = s / static_cast<double>(n);
      }
    }
  }
  return out;
}

void server_update(ServerState& state, const ModelVector& grad) {
  const ModelVector step = state.pi_mu_factor.solve(grad);
  for (std::size_t j = 0; j < state.w.size(); ++j) state.w[j] -= step[j];
  ++state.round;
}

RunResult run(const std::vector<const Objective*>& workers,
              const ModelVector& w0, const Objective& global, double f_star,
              const RunConfig& cfg) {
  const int n = static_cast<int>(workers.size());
  if (n < 1) throw std::invalid_argument("run: no workers");
  const int d = workers.front()->dim();
  const RegionPartition partition = partition_regions(d, cfg.n_regions);

  RunResult result;
  result.iterates.push_back(w0);

  auto round_start = Clock::now();

  // Phase I, with an optional round-0 sample draw per worker.
  ServerState state;
  {
    std::vector<std::unique_ptr<Objective>> views(n);
    std::vector<const Objective*> phase1_workers(n);
    for (int i = 0; i < n; ++i) {
      if (cfg.subsampled)
        views[i] = workers[i]->draw(draw_seed(cfg.seed, 0, i, n));
      phase1_workers[i] = views[i] ? views[i].get() : workers[i];
    }
    state = phase1_init(phase1_workers, w0, partition, cfg.options);
  }
  result.iterates.push_back(state.w);

  {
    // Round 0 gradient: the Phase I mean, reassembled from the Θ store.
    ModelVector g0(d, 0.0);
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += state.theta.flat(i)[j];
      g0[j] = s / static_cast<double>(n);
    }
    RoundRecord rec;
    rec.round = 0;
    rec.gap = global.value(state.w) - f_star;
    rec.grad_norm = l2_norm(g0);
    rec.regions_trained = partition.num_regions();
    rec.min_coverage = n;
    rec.gamma_t = 0;
    rec.elapsed_ms = ms_since(round_start);
    result.records.push_back(rec);
  }

  for (int t = 1; t <= cfg.rounds; ++t) {
    round_start = Clock::now();
    const MaskAssignment masks = generate_masks(
        t, n, partition.num_regions(), cfg.budget, state.ledger, cfg.seed);

    std::vector<GradientReport> reports;
    reports.reserve(n);
    for (int i = 0; i < n; ++i) {
      const std::vector<int>& regions = masks.regions_per_worker[i];
      if (regions.empty()) continue;
      std::unique_ptr<Objective> view;
      if (cfg.subsampled) view = workers[i]->draw(draw_seed(cfg.seed, t, i, n));
      const Objective& obj = view ? *view : *workers[i];
      reports.push_back(
          worker_round(obj, state.w, regions, partition, i, state.round));
    }

    const ModelVector grad = server_aggregate(state, reports);
    server_update(state, grad);
    update_ledger(state.ledger, masks);
    result.iterates.push_back(state.w);

    const std::vector<int> trained = masks.trained_regions();
    int min_cov = n;
    for (int q : trained)
      min_cov = std::min(
          min_cov, static_cast<int>(masks.workers_for_region(q).size()));

    RoundRecord rec;
    rec.round = t;
    rec.gap = global.value(state.w) - f_star;
    rec.grad_norm = l2_norm(grad);
    rec.regions_trained = static_cast<int>(trained.size());
    rec.min_coverage = min_cov;
    rec.gamma_t = state.ledger.history().back().gamma_after;
    rec.elapsed_ms = ms_since(round_start);
    result.records.push_back(rec);
  }

  result.final_w = state.w;
  result.state = std::move(state);
  return result;
}

}  // namespace danl
