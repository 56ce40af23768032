#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "danl/loss.hpp"

namespace danl {

struct Dataset {
  std::vector<Sample> samples;
  int dim = 0;  // max feature index + 1 (or the override)
  std::string source_name;

  int size() const { return static_cast<int>(samples.size()); }
};

/// Parses LibSVM text: `<label> <idx>:<val> ...`, 1-based ascending indices,
/// labels in {+1,-1} or {1,0} (mapped to {1,0}). Throws ConfigError with the
/// offending line number on malformed input. `dim_override` forces a larger
/// dimension so related files (a1a/a2a/a3a) can share one parameter space.
Dataset parse_libsvm(std::istream& in, const std::string& source_name = "",
                     std::optional<int> dim_override = std::nullopt);

Dataset load_libsvm_file(const std::string& path,
                         std::optional<int> dim_override = std::nullopt);

/// Canonical text form; reparsing it reproduces the dataset exactly.
void serialize_libsvm(const Dataset& ds, std::ostream& out);

/// Seeded shuffle, then contiguous split into near-equal shards
/// (sizes differ by at most one). The shards partition the dataset.
std::vector<Shard> shard_dataset(const Dataset& ds, int n_workers,
                                 std::uint64_t seed);

/// Synthetic logistic instance: features ~ N(0,1), labels Bernoulli(p(aᵀw°))
/// for a hidden w° with ‖w°‖ = 2. Deterministic per seed. The generating
/// vector is written to truth_out when given.
Dataset synth_logistic(int d, int m_total, std::uint64_t seed,
                       ModelVector* truth_out = nullptr);

/// Region-aligned synthetic instance: each sample's features live inside a
/// single block of the `blocks`-way contiguous partition of [0, d), cycling
/// through blocks. Sub-model training is lossless on such data (the loss
/// separates across regions), which isolates the coverage and staleness
/// effects that the sweep experiments measure. `scale` sets ‖w°‖.
Dataset synth_logistic_blocked(int d, int m_total, int blocks, double scale,
                               std::uint64_t seed,
                               ModelVector* truth_out = nullptr);

}  // namespace danl
