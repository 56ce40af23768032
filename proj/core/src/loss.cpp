#include "danl/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace danl {

namespace {

void check_dims(const ModelVector& w, const Shard& shard, const LossConfig& cfg,
                const char* op) {
  if (static_cast<int>(w.size()) != shard.dim ||
      (cfg.dim != 0 && cfg.dim != shard.dim))
    throw std::invalid_argument(std::string(op) + ": dimension mismatch");
  if (shard.samples.empty())
    throw std::invalid_argument(std::string(op) + ": empty shard");
}

double margin(const ModelVector& w, const Sample& s) {
  double z = 0.0;
  for (const auto& [idx, val] : s.features) z += w[idx] * val;
  return z;
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double loss_value(const ModelVector& w, const Shard& shard,
                  const LossConfig& cfg) {
  check_dims(w, shard, cfg, "loss_value");
  const double m = static_cast<double>(shard.size());
  double acc = 0.0;
  for (const Sample& s : shard.samples) {
    const double z = margin(w, s);
    // −log p(z) = softplus(−z); −log(1 − p(z)) = softplus(z)
    acc += s.label == 1 ? softplus(-z) : softplus(z);
  }
  return acc / m + 0.5 * cfg.lambda / m * squared_norm(w);
}

ModelVector loss_grad(const ModelVector& w, const Shard& shard,
                      const LossConfig& cfg) {
  check_dims(w, shard, cfg, "loss_grad");
  const double m = static_cast<double>(shard.size());
  ModelVector g(w.size(), 0.0);
  for (const Sample& s : shard.samples) {
    const double coef = (sigmoid(margin(w, s)) - s.label) / m;
    for (const auto& [idx, val] : s.features) g[idx] += coef * val;
  }
  const double reg = cfg.lambda / m;
  for (std::size_t j = 0; j < w.size(); ++j) g[j] += reg * w[j];
  return g;
}

SymMatrix loss_hess(const ModelVector& w, const Shard& shard,
                    const LossConfig& cfg) {
  check_dims(w, shard, cfg, "loss_hess");
  const int d = shard.dim;
  const double m = static_cast<double>(shard.size());
  std::vector<double> h(static_cast<std::size_t>(d) * d, 0.0);
  for (const Sample& s : shard.samples) {
    const double p = sigmoid(margin(w, s));
    const double coef = p * (1.0 - p) / m;
    for (const auto& [i, vi] : s.features) {
      const std::size_t row = static_cast<std::size_t>(i) * d;
      for (const auto& [j, vj] : s.features) h[row + j] += coef * vi * vj;
    }
  }
  const double reg = cfg.lambda / m;
  for (int i = 0; i < d; ++i) h[static_cast<std::size_t>(i) * d + i] += reg;
  return SymMatrix::from_dense(d, h);
}

ModelVector pruned_grad(const ModelVector& w, const Mask& mask,
                        const Shard& shard, const LossConfig& cfg) {
  if (mask.size() != w.size())
    throw std::invalid_argument("pruned_grad: mask dimension mismatch");
  return apply_mask(loss_grad(apply_mask(w, mask), shard, cfg), mask);
}

}  // namespace danl
