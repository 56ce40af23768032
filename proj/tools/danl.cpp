// danl — distributed adaptive Newton learning simulator and experiment
// harness. Subcommands: run, sweep-fig1, sweep-fig2, check-theory,
// parse-check. Exit codes: 0 success, 1 usage error, 2 numerical or
// constraint failure.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "danl/data.hpp"
#include "danl/error.hpp"
#include "danl/experiment.hpp"
#include "danl/pruning.hpp"

namespace {

using namespace danl;

void add_common_options(CLI::App& cmd, ExperimentConfig& cfg,
                        std::string& config_path) {
  cmd.add_option("--config", config_path,
                 "Config file (key = value lines, # comments); command-line "
                 "flags override it");
  cmd.add_option("--dataset", cfg.dataset, "LibSVM dataset path (empty: synthetic)");
  cmd.add_option("--dim-override", cfg.dim_override,
                 "Force parameter dimension (a1a/a2a/a3a share 123)");
  cmd.add_option("--synth-dim", cfg.synth_dim, "Synthetic instance dimension");
  cmd.add_option("--synth-samples", cfg.synth_samples, "Synthetic sample count");
  cmd.add_option("--synth-blocks", cfg.synth_blocks,
                 "Region-aligned synthetic features (0 = dense iid)");
  cmd.add_option("--synth-scale", cfg.synth_scale, "Synthetic ‖w°‖");
  cmd.add_option("--n-workers", cfg.n_workers, "Worker count N");
  cmd.add_option("--n-regions", cfg.n_regions, "Region count Q");
  cmd.add_option("--rounds", cfg.rounds, "Phase II rounds T");
  cmd.add_option("--lambda", cfg.lambda, "L2 regularization weight");
  cmd.add_option("--mu", cfg.mu, "Projection floor (0: lambda / mean shard size)");
  cmd.add_option("--psi-min", cfg.psi_min, "Min workers per trained region (0: N)");
  cmd.add_option("--s-min", cfg.s_min, "Min trained regions per round (0: Q)");
  cmd.add_option("--gamma-max", cfg.gamma_max, "Staleness cap (0: unbounded)");
  cmd.add_option("--seed", cfg.seed, "Run seed")->envname("DANL_SEED");
  cmd.add_option("--data-seed", cfg.data_seed,
                 "Dataset realization seed (0: use --seed)");
  cmd.add_option("--fedavg-rounds", cfg.fedavg_rounds, "Warm-start rounds");
  cmd.add_option("--fedavg-lr", cfg.fedavg_lr, "Warm-start learning rate");
  cmd.add_option("--newton-iters", cfg.newton_iters, "Reference Newton iterations");
  cmd.add_option("--aggregation", cfg.aggregation,
                 "'uniform' (1/N over stored fragments) or 'coverage' (1/|C|)");
  cmd.add_option("--subsample", cfg.subsample, "Per-round worker sample fraction");
  cmd.add_option("--ref-cache", cfg.ref_cache,
                 "Sidecar file caching (w*, f*) per objective");
}

// Writes to the path, or stdout for "-".
void emit(const std::string& path, const std::string& content) {
  if (path == "-" || path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write output file: " + path);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DANL: distributed Newton optimization with a one-shot projected "
               "Hessian, pruned sub-models, and stale-fragment aggregation"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string config_path;
  std::string output = "-";
  std::string mask_history;
  int theory_trials = 1000;
  int theory_dim = 20;
  std::string lint_path;

  CLI::App* cmd_run = app.add_subcommand("run", "One experiment; trajectory CSV");
  add_common_options(*cmd_run, cfg, config_path);
  cmd_run->add_option("-o,--output", output, "Trajectory CSV path ('-': stdout)");
  cmd_run->add_option("--mask-history", mask_history,
                      "Also export the mask-assignment audit CSV here");

  CLI::App* cmd_fig1 = app.add_subcommand(
      "sweep-fig1", "Coverage scenarios (psi*=1,S*=4) (psi*=3,S*=4) (psi*=10,S*=1)");
  add_common_options(*cmd_fig1, cfg, config_path);
  cmd_fig1->add_option("-o,--output", output, "Sweep CSV path ('-': stdout)");

  CLI::App* cmd_fig2 = app.add_subcommand(
      "sweep-fig2", "Staleness grid (psi*, gamma_max) in {1,2}x{2,4} at S*=4");
  add_common_options(*cmd_fig2, cfg, config_path);
  cmd_fig2->add_option("-o,--output", output, "Sweep CSV path ('-': stdout)");

  CLI::App* cmd_theory = app.add_subcommand(
      "check-theory", "Projection-contraction battery and convergence ratios");
  cmd_theory->add_option("--seed", cfg.seed, "Battery seed")->envname("DANL_SEED");
  cmd_theory->add_option("--trials", theory_trials, "Projection trials");
  cmd_theory->add_option("--matrix-dim", theory_dim, "Trial matrix dimension");

  CLI::App* cmd_lint = app.add_subcommand("parse-check", "Lint a LibSVM file");
  cmd_lint->add_option("path", lint_path, "Dataset file")->required();
  cmd_lint->add_option("--dim-override", cfg.dim_override, "Expected dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (!config_path.empty()) {
      CLI::App* active = app.get_subcommands().front();
      std::vector<std::string> cli_set;
      for (const CLI::Option* opt : active->get_options())
        if (opt->count() > 0 && !opt->get_lnames().empty())
          cli_set.push_back(opt->get_lnames().front());
      apply_config_file(config_path, cfg, cli_set);
    }

    if (*cmd_run) {
      const RunResult result = run_experiment(cfg);
      std::ostringstream csv;
      write_trajectory_csv(result.records, csv);
      emit(output, csv.str());
      if (!mask_history.empty()) {
        std::ostringstream audit;
        write_mask_history_csv(result.state.ledger, audit);
        emit(mask_history, audit.str());
      }
      std::cerr << "final gap " << result.records.back().gap << " after "
                << result.records.back().round << " rounds\n";
    } else if (*cmd_fig1 || *cmd_fig2) {
      const auto cells = *cmd_fig1 ? sweep_fig1(cfg) : sweep_fig2(cfg);
      std::ostringstream csv;
      write_sweep_csv(cells, csv);
      emit(output, csv.str());
    } else if (*cmd_theory) {
      const TheoryReport report = check_theory(cfg.seed, theory_trials, theory_dim);
      write_theory_report(report, std::cout);
      if (report.lemma_violations != 0) return 2;
    } else if (*cmd_lint) {
      std::optional<int> forced_dim;
      if (cfg.dim_override > 0) forced_dim = cfg.dim_override;
      Dataset ds;
      try {
        ds = load_libsvm_file(lint_path, forced_dim);
      } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;  // lint finding
      }
      int positive = 0;
      std::size_t nnz = 0;
      for (const Sample& s : ds.samples) {
        positive += s.label;
        nnz += s.features.size();
      }
      std::cout << "samples=" << ds.size() << " dim=" << ds.dim
                << " positives=" << positive << " negatives="
                << ds.size() - positive << " avg_nnz="
                << (ds.size() ? double(nnz) / ds.size() : 0.0) << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
