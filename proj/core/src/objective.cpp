#include "danl/objective.hpp"

#include <stdexcept>

#include "danl/rng.hpp"

namespace danl {

ModelVector masked_grad(const Objective& objective, const ModelVector& w,
                        const Mask& mask) {
  return apply_mask(objective.grad(apply_mask(w, mask)), mask);
}

LogisticShardObjective::LogisticShardObjective(Shard shard, LossConfig cfg,
                                               double subsample)
    : shard_(std::move(shard)), cfg_(cfg), subsample_(subsample) {
  if (cfg_.dim == 0) cfg_.dim = shard_.dim;
  if (subsample_ <= 0.0 || subsample_ > 1.0)
    throw std::invalid_argument("LogisticShardObjective: subsample in (0,1]");
}

double LogisticShardObjective::value(const ModelVector& w) const {
  return loss_value(w, shard_, cfg_);
}

ModelVector LogisticShardObjective::grad(const ModelVector& w) const {
  return loss_grad(w, shard_, cfg_);
}

SymMatrix LogisticShardObjective::hess(const ModelVector& w) const {
  return loss_hess(w, shard_, cfg_);
}

std::unique_ptr<Objective> LogisticShardObjective::draw(
    std::uint64_t round_seed) const {
  if (subsample_ >= 1.0) return nullptr;
  const int m = shard_.size();
  const int k = std::max(1, static_cast<int>(subsample_ * m + 0.5));
  if (k >= m) return nullptr;
  Rng rng(round_seed);
  Shard sub;
  sub.dim = shard_.dim;
  sub.worker_id = shard_.worker_id;
  for (int idx : rng.sample_subset(m, k))
    sub.samples.push_back(shard_.samples[idx]);
  return std::make_unique<LogisticShardObjective>(std::move(sub), cfg_);
}

double QuadraticObjective::value(const ModelVector& w) const {
  return 0.5 * dot(w, h_.matvec(w));
}

GlobalObjective::GlobalObjective(std::vector<const Objective*> workers)
    : workers_(std::move(workers)) {
  if (workers_.empty())
    throw std::invalid_argument("GlobalObjective: no workers");
  dim_ = workers_.front()->dim();
  for (const Objective* w : workers_)
    if (w->dim() != dim_)
      throw std::invalid_argument("GlobalObjective: worker dim mismatch");
}

double GlobalObjective::value(const ModelVector& w) const {
  double s = 0.0;
  for (const Objective* o : workers_) s += o->value(w);
  return s / static_cast<double>(workers_.size());
}

ModelVector GlobalObjective::grad(const ModelVector& w) const {
  ModelVector out(dim_, 0.0);
  for (const Objective* o : workers_) {
    const ModelVector g = o->grad(w);
    for (int j = 0; j < dim_; ++j) out[j] += g[j];
  }
  const double n = static_cast<double>(workers_.size());
  for (int j = 0; j < dim_; ++j) out[j] /= n;
  return out;
}

SymMatrix GlobalObjective::hess(const ModelVector& w) const {
  SymMatrix acc(dim_);
  for (const Objective* o : workers_) acc.add_scaled(o->hess(w), 1.0);
  acc.scale(1.0 / static_cast<double>(workers_.size()));
  return acc;
}

}  // namespace danl
