#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "danl/linalg.hpp"
#include "danl/loss.hpp"
#include "danl/vec.hpp"

namespace danl {

/// A worker's local objective: value, gradient, and Hessian at a model point.
/// Implementations must be pure (safe to call concurrently).
class Objective {
 public:
  virtual ~Objective() = default;
  virtual int dim() const = 0;
  virtual double value(const ModelVector& w) const = 0;
  virtual ModelVector grad(const ModelVector& w) const = 0;
  virtual SymMatrix hess(const ModelVector& w) const = 0;

  /// Round-specific stochastic view of this objective, or nullptr to use the
  /// full objective. The default is the deterministic full-data regime.
  virtual std::unique_ptr<Objective> draw(std::uint64_t /*round_seed*/) const {
    return nullptr;
  }
};

/// ∇F(ω ⊙ τ) ⊙ τ for any objective.
ModelVector masked_grad(const Objective& objective, const ModelVector& w,
                        const Mask& mask);

/// Logistic shard loss behind the Objective interface. With subsample < 1,
/// draw() evaluates the round on a seeded random fraction of the shard.
class LogisticShardObjective : public Objective {
 public:
  LogisticShardObjective(Shard shard, LossConfig cfg, double subsample = 1.0);

  int dim() const override { return cfg_.dim; }
  double value(const ModelVector& w) const override;
  ModelVector grad(const ModelVector& w) const override;
  SymMatrix hess(const ModelVector& w) const override;
  std::unique_ptr<Objective> draw(std::uint64_t round_seed) const override;

  const Shard& shard() const { return shard_; }

 private:
  Shard shard_;
  LossConfig cfg_;
  double subsample_;
};

/// F(ω) = ½ ωᵀHω. Test and calibration objective; Newton is exact on it.
class QuadraticObjective : public Objective {
 public:
  explicit QuadraticObjective(SymMatrix h) : h_(std::move(h)) {}

  int dim() const override { return h_.dim(); }
  double value(const ModelVector& w) const override;
  ModelVector grad(const ModelVector& w) const override { return h_.matvec(w); }
  SymMatrix hess(const ModelVector& /*w*/) const override { return h_; }

 private:
  SymMatrix h_;
};

/// The global objective f̂ = (1/N) Σᵢ Fᵢ. Sums worker terms in ascending
/// worker order before dividing, so results are reproducible bit for bit.
class GlobalObjective : public Objective {
 public:
  explicit GlobalObjective(std::vector<const Objective*> workers);

  int dim() const override { return dim_; }
  double value(const ModelVector& w) const override;
  ModelVector grad(const ModelVector& w) const override;
  SymMatrix hess(const ModelVector& w) const override;

  int n_workers() const { return static_cast<int>(workers_.size()); }

 private:
  std::vector<const Objective*> workers_;
  int dim_ = 0;
};

}  // namespace danl
