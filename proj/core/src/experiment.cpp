#include "danl/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <fstream>
#include <ostream>
#include <sstream>

#include "danl/error.hpp"
#include "danl/rng.hpp"

namespace danl {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Budget resolve_budget(const ExperimentConfig& cfg) {
  Budget b;
  b.psi_min = cfg.psi_min > 0 ? cfg.psi_min : cfg.n_workers;
  b.s_min = cfg.s_min > 0 ? cfg.s_min : cfg.n_regions;
  b.gamma_max = cfg.gamma_max;
  return b;
}

}  // namespace

ExperimentContext prepare_experiment(const ExperimentConfig& cfg) {
  cfg.validate();

  ExperimentContext ctx;
  const std::uint64_t data_seed = cfg.data_seed ? cfg.data_seed : cfg.seed;
  if (cfg.dataset.empty()) {
    ctx.dataset =
        cfg.synth_blocks > 0
            ? synth_logistic_blocked(cfg.synth_dim, cfg.synth_samples,
                                     cfg.synth_blocks, cfg.synth_scale,
                                     data_seed)
            : synth_logistic(cfg.synth_dim, cfg.synth_samples, data_seed);
  } else {
    std::optional<int> forced_dim;
    if (cfg.dim_override > 0) forced_dim = cfg.dim_override;
    ctx.dataset = load_libsvm_file(cfg.dataset, forced_dim);
  }
  if (cfg.n_regions > ctx.dataset.dim)
    throw ConfigError("config: n_regions exceeds parameter dimension " +
                      std::to_string(ctx.dataset.dim));

  const std::vector<Shard> shards =
      shard_dataset(ctx.dataset, cfg.n_workers, cfg.seed);
  double mean_size = 0.0;
  for (const Shard& s : shards) mean_size += s.size();
  mean_size /= static_cast<double>(shards.size());
  ctx.mean_shard_size = mean_size;
  ctx.mu = cfg.mu > 0.0 ? cfg.mu : cfg.lambda / mean_size;
  if (!(ctx.mu > 0.0))
    throw ConfigError(
        "config: projection floor is zero; set mu > 0 or lambda > 0");

  LossConfig loss_cfg{cfg.lambda, ctx.dataset.dim};
  for (const Shard& s : shards)
    ctx.owned.push_back(
        std::make_unique<LogisticShardObjective>(s, loss_cfg, cfg.subsample));
  for (const auto& o : ctx.owned) ctx.workers.push_back(o.get());
  ctx.global = std::make_unique<GlobalObjective>(ctx.workers);

  ctx.w0 = fedavg_warmstart(ctx.workers, cfg.fedavg_rounds, cfg.fedavg_lr);

  const std::string key =
      RefCache::make_key(cfg, ctx.dataset.source_name, ctx.dataset.dim);
  if (!cfg.ref_cache.empty()) {
    RefCache cache(cfg.ref_cache);
    if (const NewtonReference* hit = cache.find(key)) {
      ctx.reference = *hit;
    } else {
      ctx.reference = newton_reference(*ctx.global, cfg.newton_iters);
      cache.put(key, ctx.reference);
    }
  } else {
    ctx.reference = newton_reference(*ctx.global, cfg.newton_iters);
  }
  return ctx;
}

RunResult run_with_budget(const ExperimentContext& ctx,
                          const ExperimentConfig& cfg, const Budget& budget) {
  RunConfig rc;
  rc.n_regions = cfg.n_regions;
  rc.rounds = cfg.rounds;
  rc.budget = budget;
  rc.seed = cfg.seed;
  rc.options.mu = ctx.mu;
  rc.options.coverage_weighted = cfg.aggregation == "coverage";
  rc.subsampled = cfg.subsample < 1.0;
  return run(ctx.workers, ctx.w0, *ctx.global, ctx.reference.f_star, rc);
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  const ExperimentContext ctx = prepare_experiment(cfg);
  return run_with_budget(ctx, cfg, resolve_budget(cfg));
}

void write_trajectory_csv(const std::vector<RoundRecord>& records,
                          std::ostream& out) {
  out << "round,gap,grad_norm,regions_trained,min_coverage,gamma_t,elapsed_ms\n";
  char ms[32];
  for (const RoundRecord& r : records) {
    std::snprintf(ms, sizeof(ms), "%.3f", r.elapsed_ms);
    out << r.round << ',' << fmt_double(r.gap) << ',' << fmt_double(r.grad_norm)
        << ',' << r.regions_trained << ',' << r.min_coverage << ','
        << r.gamma_t << ',' << ms << '\n';
  }
}

int rounds_to_threshold(const std::vector<RoundRecord>& records,
                        double threshold) {
  for (const RoundRecord& r : records)
    if (r.gap <= threshold) return r.round;
  return -1;
}

namespace {

SweepCell run_cell(const ExperimentContext& ctx, const ExperimentConfig& cfg,
                   const std::string& name, int psi_min, int s_min,
                   int gamma_max) {
  ExperimentConfig cell_cfg = cfg;
  cell_cfg.psi_min = psi_min;
  cell_cfg.s_min = s_min;
  cell_cfg.gamma_max = gamma_max;
  Budget budget{psi_min, s_min, gamma_max};
  const RunResult result = run_with_budget(ctx, cell_cfg, budget);
  SweepCell cell;
  cell.scenario = name;
  cell.psi_min = psi_min;
  cell.s_min = s_min;
  cell.gamma_max = gamma_max;
  cell.rounds_to_1e2 = rounds_to_threshold(result.records, 1e-2);
  cell.rounds_to_1e4 = rounds_to_threshold(result.records, 1e-4);
  cell.rounds_to_1e6 = rounds_to_threshold(result.records, 1e-6);
  return cell;
}

}  // namespace

std::vector<SweepCell> sweep_fig1(const ExperimentConfig& base) {
  const ExperimentContext ctx = prepare_experiment(base);
  std::vector<SweepCell> cells;
  cells.push_back(run_cell(ctx, base, "psi1_s4", 1, 4, 0));
  cells.push_back(run_cell(ctx, base, "psi3_s4", 3, 4, 0));
  cells.push_back(run_cell(ctx, base,
                           "psi" + std::to_string(base.n_workers) + "_s1",
                           base.n_workers, 1, 0));
  return cells;
}

std::vector<SweepCell> sweep_fig2(const ExperimentConfig& base) {
  const ExperimentContext ctx = prepare_experiment(base);
  std::vector<SweepCell> cells;
  for (int psi : {1, 2})
    for (int gamma : {2, 4}) {
      std::ostringstream name;
      name << "psi" << psi << "_gamma" << gamma;
      cells.push_back(run_cell(ctx, base, name.str(), psi, 4, gamma));
    }
  return cells;
}

void write_sweep_csv(const std::vector<SweepCell>& cells, std::ostream& out) {
  out << "scenario,psi_min,s_min,gamma_max,rounds_to_1e-2,rounds_to_1e-4,"
         "rounds_to_1e-6\n";
  for (const SweepCell& c : cells)
    out << c.scenario << ',' << c.psi_min << ',' << c.s_min << ','
        << c.gamma_max << ',' << c.rounds_to_1e2 << ',' << c.rounds_to_1e4
        << ',' << c.rounds_to_1e6 << '\n';
}

TheoryReport check_theory(std::uint64_t seed, int trials, int matrix_dim) {
  if (trials < 1) throw std::invalid_argument("check_theory: trials >= 1");
  TheoryReport report;
  report.lemma_trials = trials;

  const int d = matrix_dim;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, 0x1e44a, static_cast<std::uint64_t>(trial)));
    const double mu = 2.0 * rng.uniform01();

    std::vector<double> raw(static_cast<std::size_t>(d) * d);
    for (auto& v : raw) v = rng.normal();
    const SymMatrix pi = SymMatrix::from_dense(d, raw);

    // Π* = BᵀB/d + μI has min eigenvalue >= μ.
    std::vector<double> b(static_cast<std::size_t>(d) * d);
    for (auto& v : b) v = rng.normal();
    std::vector<double> btb(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int k = 0; k < d; ++k)
          s += b[static_cast<std::size_t>(k) * d + i] *
               b[static_cast<std::size_t>(k) * d + j];
        btb[static_cast<std::size_t>(i) * d + j] = s / d + (i == j ? mu : 0.0);
      }
    const SymMatrix pi_star = SymMatrix::from_dense(d, btb);

    SymMatrix proj = project_psd(pi, mu);
    proj.add_scaled(pi_star, -1.0);
    SymMatrix diff = pi;
    diff.add_scaled(pi_star, -1.0);
    if (proj.frobenius_norm() > diff.frobenius_norm() + 1e-10) {
      ++report.lemma_violations;
      report.violating_trials.push_back(trial);
    }
  }

  // Contraction battery: full-coverage runs on synthetic instances.
  for (int instance = 0; instance < 3; ++instance) {
    ExperimentConfig cfg;
    cfg.seed = derive_seed(seed, 0xc0417ac7, static_cast<std::uint64_t>(instance));
    cfg.rounds = 40;
    const ExperimentContext ctx = prepare_experiment(cfg);
    const RunResult result =
        run_with_budget(ctx, cfg, Budget{cfg.n_workers, cfg.n_regions, 0});
    for (std::size_t k = 1; k + 1 < result.iterates.size(); ++k) {
      const double gap = result.records[k - 1].gap;
      const double dist2 =
          squared_distance(result.iterates[k], ctx.reference.w_star);
      if (gap > 1e-2 || dist2 < 1e-20) continue;  // outside the measurable basin
      const double next2 =
          squared_distance(result.iterates[k + 1], ctx.reference.w_star);
      const double ratio = next2 / dist2;
      ++report.basin_rounds;
      if (ratio <= 0.5) ++report.contracting_rounds;
      report.max_ratio = std::max(report.max_ratio, ratio);
    }
  }
  return report;
}

void write_theory_report(const TheoryReport& report, std::ostream& out) {
  out << "lemma_trials=" << report.lemma_trials
      << " violations=" << report.lemma_violations << '\n';
  for (int t : report.violating_trials)
    out << "  violation at trial " << t << '\n';
  out << "contraction: basin_rounds=" << report.basin_rounds
      << " contracting=" << report.contracting_rounds
      << " fraction=" << fmt_double(report.fraction_contracting())
      << " max_ratio=" << fmt_double(report.max_ratio) << '\n';
}

std::string RefCache::make_key(const ExperimentConfig& cfg,
                               const std::string& source_name, int dim) {
  std::ostringstream key;
  key << source_name << "|d=" << dim << "|lambda=" << fmt_double(cfg.lambda)
      << "|iters=" << cfg.newton_iters << "|N=" << cfg.n_workers
      << "|seed=" << cfg.seed;
  return key.str();
}

RefCache::RefCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    if (!std::getline(ls, key, '\t')) continue;
    NewtonReference ref;
    std::string field;
    if (!std::getline(ls, field, '\t')) continue;
    ref.f_star = std::strtod(field.c_str(), nullptr);
    if (!std::getline(ls, field, '\t')) continue;
    const int d = std::atoi(field.c_str());
    if (!std::getline(ls, field, '\t')) continue;
    std::istringstream ws(field);
    double v;
    while (ws >> v) ref.w_star.push_back(v);
    if (static_cast<int>(ref.w_star.size()) != d) continue;  // corrupt row
    entries_.emplace_back(std::move(key), std::move(ref));
  }
}

const NewtonReference* RefCache::find(const std::string& key) const {
  for (const auto& [k, ref] : entries_)
    if (k == key) return &ref;
  return nullptr;
}

void RefCache::put(const std::string& key, const NewtonReference& ref) {
  entries_.emplace_back(key, ref);
  std::ofstream out(path_, std::ios::trunc);
  if (!out) throw ConfigError("RefCache: cannot write " + path_);
  out << "# danl newton reference cache\n";
  for (const auto& [k, r] : entries_) {
    out << k << '\t' << fmt_double(r.f_star) << '\t' << r.w_star.size() << '\t';
    for (std::size_t j = 0; j < r.w_star.size(); ++j)
      out << (j ? " " : "") << fmt_double(r.w_star[j]);
    out << '\n';
  }
}

}  // namespace danl
