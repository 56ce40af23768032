#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace danl {

/// Full experiment configuration. Field names double as config-file keys and
/// CLI flag names (dashes for underscores). Zero means "use the derived
/// default" for mu (λ / mean shard size), psi_min (N), s_min (Q) and
/// gamma_max (unbounded).
struct ExperimentConfig {
  std::string dataset;        // LibSVM path; empty → synthetic instance
  int dim_override = 0;       // force parameter dimension (a1a/a2a/a3a share 123)
  int synth_dim = 30;
  int synth_samples = 2000;
  int synth_blocks = 0;      // 0 = dense iid features; >0 = region-aligned
  double synth_scale = 2.0;  // ‖w°‖ of the generating vector

  int n_workers = 10;
  int n_regions = 4;
  int rounds = 100;           // Phase II rounds T
  double lambda = 1e-4;
  double mu = 0.0;

  int psi_min = 0;
  int s_min = 0;
  int gamma_max = 0;

  std::uint64_t seed = 42;
  std::uint64_t data_seed = 0;  // dataset realization seed; 0 = use `seed`

  int fedavg_rounds = 10;
  double fedavg_lr = 0.1;
  int newton_iters = 20;

  std::string aggregation = "uniform";  // "uniform" (1/N) | "coverage" (1/|C|)
  double subsample = 1.0;               // per-round worker sample fraction
  std::string ref_cache;                // sidecar path for (w*, f*); "" = off

  // Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Applies a `key = value` config file (# starts a comment) to cfg. Keys are
/// the CLI flag spellings without leading dashes; '-' and '_' are
/// interchangeable. Keys named in `skip` are left untouched — the CLI passes
/// the flags the user set explicitly, so command line beats file. Throws
/// ConfigError naming the offending line on unknown keys or bad values.
void apply_config_file(const std::string& path, ExperimentConfig& cfg,
                       const std::vector<std::string>& skip = {});

}  // namespace danl
