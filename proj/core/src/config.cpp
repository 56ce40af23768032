#include "danl/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "danl/error.hpp"

namespace danl {

void ExperimentConfig::validate() const {
  if (n_workers < 1) throw ConfigError("config: n_workers must be >= 1");
  if (n_regions < 1) throw ConfigError("config: n_regions must be >= 1");
  if (rounds < 0) throw ConfigError("config: rounds must be >= 0");
  if (lambda < 0.0) throw ConfigError("config: lambda must be >= 0");
  if (mu < 0.0) throw ConfigError("config: mu must be >= 0");
  if (psi_min < 0 || psi_min > n_workers)
    throw ConfigError("config: psi_min must be in [0, n_workers]");
  if (s_min < 0 || s_min > n_regions)
    throw ConfigError("config: s_min must be in [0, n_regions]");
  if (gamma_max < 0) throw ConfigError("config: gamma_max must be >= 0");
  if (fedavg_rounds < 1) throw ConfigError("config: fedavg_rounds must be >= 1");
  if (fedavg_lr < 0.0) throw ConfigError("config: fedavg_lr must be >= 0");
  if (newton_iters < 1) throw ConfigError("config: newton_iters must be >= 1");
  if (aggregation != "uniform" && aggregation != "coverage")
    throw ConfigError("config: aggregation must be 'uniform' or 'coverage'");
  if (subsample <= 0.0 || subsample > 1.0)
    throw ConfigError("config: subsample must be in (0, 1]");
  if (dataset.empty()) {
    if (synth_dim < 2) throw ConfigError("config: synth_dim must be >= 2");
    if (synth_samples < synth_dim)
      throw ConfigError("config: synth_samples must be >= synth_dim");
    if (synth_blocks < 0 || synth_blocks > synth_dim)
      throw ConfigError("config: synth_blocks must be in [0, synth_dim]");
    if (!(synth_scale > 0.0))
      throw ConfigError("config: synth_scale must be > 0");
  }
  if (dim_override < 0) throw ConfigError("config: dim_override must be >= 0");
}

namespace {

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

int parse_int(const std::string& v) {
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty())
    throw ConfigError("not an integer: '" + v + "'");
  return static_cast<int>(x);
}

std::uint64_t parse_u64(const std::string& v) {
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty())
    throw ConfigError("not an unsigned integer: '" + v + "'");
  return x;
}

double parse_double(const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || v.empty())
    throw ConfigError("not a number: '" + v + "'");
  return x;
}

}  // namespace

void apply_config_file(const std::string& path, ExperimentConfig& cfg,
                       const std::vector<std::string>& skip) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);

  const std::vector<
      std::pair<std::string, std::function<void(const std::string&)>>>
      setters{
          {"dataset", [&](const std::string& v) { cfg.dataset = v; }},
          {"dim-override",
           [&](const std::string& v) { cfg.dim_override = parse_int(v); }},
          {"synth-dim",
           [&](const std::string& v) { cfg.synth_dim = parse_int(v); }},
          {"synth-samples",
           [&](const std::string& v) { cfg.synth_samples = parse_int(v); }},
          {"synth-blocks",
           [&](const std::string& v) { cfg.synth_blocks = parse_int(v); }},
          {"synth-scale",
           [&](const std::string& v) { cfg.synth_scale = parse_double(v); }},
          {"n-workers",
           [&](const std::string& v) { cfg.n_workers = parse_int(v); }},
          {"n-regions",
           [&](const std::string& v) { cfg.n_regions = parse_int(v); }},
          {"rounds", [&](const std::string& v) { cfg.rounds = parse_int(v); }},
          {"lambda",
           [&](const std::string& v) { cfg.lambda = parse_double(v); }},
          {"mu", [&](const std::string& v) { cfg.mu = parse_double(v); }},
          {"psi-min",
           [&](const std::string& v) { cfg.psi_min = parse_int(v); }},
          {"s-min", [&](const std::string& v) { cfg.s_min = parse_int(v); }},
          {"gamma-max",
           [&](const std::string& v) { cfg.gamma_max = parse_int(v); }},
          {"seed", [&](const std::string& v) { cfg.seed = parse_u64(v); }},
          {"data-seed",
           [&](const std::string& v) { cfg.data_seed = parse_u64(v); }},
          {"fedavg-rounds",
           [&](const std::string& v) { cfg.fedavg_rounds = parse_int(v); }},
          {"fedavg-lr",
           [&](const std::string& v) { cfg.fedavg_lr = parse_double(v); }},
          {"newton-iters",
           [&](const std::string& v) { cfg.newton_iters = parse_int(v); }},
          {"aggregation", [&](const std::string& v) { cfg.aggregation = v; }},
          {"subsample",
           [&](const std::string& v) { cfg.subsample = parse_double(v); }},
          {"ref-cache", [&](const std::string& v) { cfg.ref_cache = v; }},
      };

  std::vector<std::string> skipped;
  skipped.reserve(skip.size());
  for (const std::string& k : skip) skipped.push_back(normalize_key(k));

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    const std::string key = normalize_key(trim(content.substr(0, eq)));
    const std::string value = trim(content.substr(eq + 1));
    if (std::find(skipped.begin(), skipped.end(), key) != skipped.end())
      continue;  // set on the command line; CLI wins
    bool known = false;
    for (const auto& [name, set] : setters) {
      if (name != key) continue;
      known = true;
      try {
        set(value);
      } catch (const ConfigError& e) {
        throw ConfigError(path + ":" + std::to_string(line_no) + ": " +
                          e.what());
      }
      break;
    }
    if (!known)
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": unknown key '" + key + "'");
  }
}

}  // namespace danl
