#include "danl/data.hpp"

#include <algorithm>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "danl/error.hpp"
#include "danl/pruning.hpp"
#include "danl/rng.hpp"

namespace danl {

namespace {

[[noreturn]] void parse_fail(const std::string& source, int line_no,
                             const std::string& why) {
  std::ostringstream msg;
  msg << "parse_libsvm";
  if (!source.empty()) msg << " (" << source << ")";
  msg << ": line " << line_no << ": " << why;
  throw ConfigError(msg.str());
}

}  // namespace

Dataset parse_libsvm(std::istream& in, const std::string& source_name,
                     std::optional<int> dim_override) {
  Dataset ds;
  ds.source_name = source_name;
  std::string line;
  int line_no = 0;
  int max_index = -1;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank line

    Sample sample;
    char* end = nullptr;
    const double label = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size())
      parse_fail(source_name, line_no, "non-numeric label '" + tok + "'");
    if (label == 1.0) {
      sample.label = 1;
    } else if (label == -1.0 || label == 0.0) {
      sample.label = 0;
    } else {
      parse_fail(source_name, line_no, "label must be +1/-1 or 1/0");
    }

    int prev_index = -1;
    while (ls >> tok) {
      const std::size_t colon = tok.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size())
        parse_fail(source_name, line_no, "malformed feature '" + tok + "'");
      const std::string idx_s = tok.substr(0, colon);
      const std::string val_s = tok.substr(colon + 1);
      long idx = std::strtol(idx_s.c_str(), &end, 10);
      if (end != idx_s.c_str() + idx_s.size() || idx < 1)
        parse_fail(source_name, line_no, "bad feature index '" + idx_s + "'");
      const double val = std::strtod(val_s.c_str(), &end);
      if (end != val_s.c_str() + val_s.size() || !std::isfinite(val))
        parse_fail(source_name, line_no, "bad feature value '" + val_s + "'");
      const int zero_based = static_cast<int>(idx) - 1;
      if (zero_based == prev_index)
        parse_fail(source_name, line_no,
                   "duplicate feature index " + std::to_string(idx));
      if (zero_based < prev_index)
        parse_fail(source_name, line_no,
                   "out-of-order feature index " + std::to_string(idx));
      prev_index = zero_based;
      max_index = std::max(max_index, zero_based);
      sample.features.emplace_back(zero_based, val);
    }
    ds.samples.push_back(std::move(sample));
  }

  ds.dim = max_index + 1;
  if (dim_override) {
    if (*dim_override < ds.dim)
      throw ConfigError("parse_libsvm: dim override " +
                        std::to_string(*dim_override) +
                        " below observed dimension " + std::to_string(ds.dim));
    ds.dim = *dim_override;
  }
  if (ds.dim < 1) throw ConfigError("parse_libsvm: no features in input");
  return ds;
}

Dataset load_libsvm_file(const std::string& path,
                         std::optional<int> dim_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset file: " + path);
  return parse_libsvm(in, path, dim_override);
}

void serialize_libsvm(const Dataset& ds, std::ostream& out) {
  char buf[64];
  for (const Sample& s : ds.samples) {
    out << (s.label == 1 ? "+1" : "-1");
    for (const auto& [idx, val] : s.features) {
      std::snprintf(buf, sizeof(buf), "%.17g", val);
      out << ' ' << (idx + 1) << ':' << buf;
    }
    out << '\n';
  }
}

std::vector<Shard> shard_dataset(const Dataset& ds, int n_workers,
                                 std::uint64_t seed) {
  const int n = ds.size();
  if (n_workers < 1) throw ConfigError("shard_dataset: need at least 1 worker");
  if (n_workers > n)
    throw ConfigError("shard_dataset: more workers (" +
                      std::to_string(n_workers) + ") than samples (" +
                      std::to_string(n) + ")");

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  Rng rng(derive_seed(seed, /*stream=*/0x5da7a));
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i + 1)));
    std::swap(order[i], order[j]);
  }

  const int base = n / n_workers;
  const int extra = n % n_workers;  // first `extra` shards get one more
  std::vector<Shard> shards(n_workers);
  int pos = 0;
  for (int w = 0; w < n_workers; ++w) {
    const int count = base + (w < extra ? 1 : 0);
    shards[w].dim = ds.dim;
    shards[w].worker_id = w;
    shards[w].samples.reserve(count);
    for (int k = 0; k < count; ++k)
      shards[w].samples.push_back(ds.samples[order[pos++]]);
  }
  return shards;
}

Dataset synth_logistic(int d, int m_total, std::uint64_t seed,
                       ModelVector* truth_out) {
  if (d < 2) throw ConfigError("synth_logistic: d must be >= 2");
  if (m_total < d) throw ConfigError("synth_logistic: need m_total >= d");

  Rng rng(derive_seed(seed, /*stream=*/0x5a11d));
  ModelVector truth(d);
  for (int j = 0; j < d; ++j) truth[j] = rng.normal();
  const double norm = l2_norm(truth);
  for (double& v : truth) v *= 2.0 / norm;  // fixed ‖w°‖ keeps labels noisy
  if (truth_out) *truth_out = truth;

  Dataset ds;
  ds.dim = d;
  {
    std::ostringstream name;
    name << "synth(d=" << d << ",m=" << m_total << ",seed=" << seed << ")";
    ds.source_name = name.str();
  }
  ds.samples.reserve(m_total);
  for (int i = 0; i < m_total; ++i) {
    Sample s;
    s.features.reserve(d);
    double z = 0.0;
    for (int j = 0; j < d; ++j) {
      const double x = rng.normal();
      s.features.emplace_back(j, x);
      z += x * truth[j];
    }
    s.label = rng.uniform01() < sigmoid(z) ? 1 : 0;
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

Dataset synth_logistic_blocked(int d, int m_total, int blocks, double scale,
                               std::uint64_t seed, ModelVector* truth_out) {
  if (d < 2) throw ConfigError("synth_logistic_blocked: d must be >= 2");
  if (m_total < d) throw ConfigError("synth_logistic_blocked: need m_total >= d");
  if (blocks < 1 || blocks > d)
    throw ConfigError("synth_logistic_blocked: need 1 <= blocks <= d");
  if (!(scale > 0.0)) throw ConfigError("synth_logistic_blocked: scale > 0");

  Rng rng(derive_seed(seed, /*stream=*/0xb10c));
  ModelVector truth(d);
  for (int j = 0; j < d; ++j) truth[j] = rng.normal();
  const double norm = l2_norm(truth);
  for (double& v : truth) v *= scale / norm;
  if (truth_out) *truth_out = truth;

  const RegionPartition partition = partition_regions(d, blocks);
  Dataset ds;
  ds.dim = d;
  {
    std::ostringstream name;
    name << "synth_blocked(d=" << d << ",m=" << m_total << ",q=" << blocks
         << ",scale=" << scale << ",seed=" << seed << ")";
    ds.source_name = name.str();
  }
  ds.samples.reserve(m_total);
  for (int i = 0; i < m_total; ++i) {
    const auto [begin, end] = partition.ranges[i % blocks];
    Sample s;
    s.features.reserve(end - begin);
    double z = 0.0;
    for (int j = begin; j < end; ++j) {
      const double x = rng.normal();
      s.features.emplace_back(j, x);
      z += x * truth[j];
    }
    s.label = rng.uniform01() < sigmoid(z) ? 1 : 0;
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

}  // namespace danl
