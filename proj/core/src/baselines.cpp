#include "danl/baselines.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "danl/error.hpp"
#include "danl/linalg.hpp"

namespace danl {

ModelVector fedavg_warmstart(const std::vector<const Objective*>& workers,
                             int rounds, double lr) {
  const int n = static_cast<int>(workers.size());
  if (n < 1) throw std::invalid_argument("fedavg_warmstart: no workers");
  if (rounds < 1) throw std::invalid_argument("fedavg_warmstart: rounds >= 1");
  if (!(lr >= 0.0)) throw std::invalid_argument("fedavg_warmstart: lr >= 0");
  const int d = workers.front()->dim();

  ModelVector w(d, 0.0);
  for (int r = 0; r < rounds; ++r) {
    ModelVector sum(d, 0.0);
    for (int i = 0; i < n; ++i) {
      const ModelVector g = workers[i]->grad(w);
      for (int j = 0; j < d; ++j) sum[j] += w[j] - lr * g[j];
    }
    for (int j = 0; j < d; ++j) w[j] = sum[j] / static_cast<double>(n);
    const double norm = l2_norm(w);
    if (norm > 1e6)
      throw NumericalError("fedavg_warmstart: diverged at round " +
                           std::to_string(r + 1) + ", |w| = " +
                           std::to_string(norm) + " (lr too large?)");
  }
  return w;
}

NewtonReference newton_reference(const Objective& objective, int iters) {
  if (iters < 1) throw std::invalid_argument("newton_reference: iters >= 1");
  const int d = objective.dim();

  NewtonReference out;
  ModelVector w(d, 0.0);
  double f_prev = objective.value(w);
  for (int k = 1; k <= iters; ++k) {
    const ModelVector g = objective.grad(w);
    const SpdFactorization f = factor_spd(objective.hess(w));
    const ModelVector step = f.solve(g);
    ModelVector w_new(d);
    for (int j = 0; j < d; ++j) w_new[j] = w[j] - step[j];
    double f_new = objective.value(w_new);
    // Loss must not increase after the first iterate; halve the step once.
    if (k > 1 && f_new > f_prev + 1e-12) {
      for (int j = 0; j < d; ++j) w_new[j] = w[j] - 0.5 * step[j];
      f_new = objective.value(w_new);
      ++out.step_halvings;
    }
    w = std::move(w_new);
    f_prev = f_new;
  }
  out.w_star = std::move(w);
  out.f_star = f_prev;
  return out;
}

std::vector<ModelVector> fixed_hessian_newton(const Objective& global,
                                              const ModelVector& w0, double mu,
                                              int steps) {
  if (steps < 0) throw std::invalid_argument("fixed_hessian_newton: steps >= 0");
  const int d = global.dim();
  if (w0.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("fixed_hessian_newton: w0 dimension mismatch");
  if (!(mu > 0.0))
    throw NumericalError("fixed_hessian_newton: mu must be positive, got " +
                         std::to_string(mu));

  std::vector<ModelVector> iterates;
  iterates.reserve(steps + 1);
  iterates.push_back(w0);
  if (steps == 0) return iterates;

  const SpdFactorization factor = factor_spd(project_psd(global.hess(w0), mu));
  ModelVector w = w0;
  for (int k = 0; k < steps; ++k) {
    const ModelVector step = factor.solve(global.grad(w));
    for (int j = 0; j < d; ++j) w[j] -= step[j];
    iterates.push_back(w);
  }
  return iterates;
}

}  // namespace danl
