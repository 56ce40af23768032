#pragma once

#include <utility>
#include <vector>

#include "danl/linalg.hpp"
#include "danl/vec.hpp"

namespace danl {

/// One labeled example with sparse features (index, value), indices ascending.
struct Sample {
  std::vector<std::pair<int, double>> features;
  int label = 0;  // 0 or 1
};

/// A worker's local data slice.
struct Shard {
  std::vector<Sample> samples;
  int dim = 0;
  int worker_id = 0;

  int size() const { return static_cast<int>(samples.size()); }
};

struct LossConfig {
  double lambda = 0.0;  // l2 regularization weight, applied as λ/(2m)·‖ω‖²
  int dim = 0;
};

/// 1/(1+e^{-z}), branch-wise so large |z| never overflows.
double sigmoid(double z);

/// log(1+e^{x}), computed without overflow for any x.
double softplus(double x);

// Regularized logistic loss of a shard:
//   F(ω) = −(1/m) Σ [b·log p(aᵀω) + (1−b)·log(1−p(aᵀω))] + λ/(2m)·‖ω‖²
double loss_value(const ModelVector& w, const Shard& shard, const LossConfig& cfg);

// ∇F(ω) = (1/m) Σ (p(aᵀω) − b)·a + (λ/m)·ω
ModelVector loss_grad(const ModelVector& w, const Shard& shard,
                      const LossConfig& cfg);

// ∇²F(ω) = (1/m) Σ p(1−p)·aaᵀ + (λ/m)·I
SymMatrix loss_hess(const ModelVector& w, const Shard& shard,
                    const LossConfig& cfg);

// ∇F(ω ⊙ τ) ⊙ τ — gradient of the pruned sub-model, zero outside the mask.
ModelVector pruned_grad(const ModelVector& w, const Mask& mask,
                        const Shard& shard, const LossConfig& cfg);

}  // namespace danl
