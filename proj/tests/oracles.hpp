// Test-only oracles, independent of the implementation paths they check.
// Dense linear algebra goes through Eigen; calculus checks go through
// central finite differences of the public entry points.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "danl/linalg.hpp"
#include "danl/loss.hpp"
#include "danl/pruning.hpp"
#include "danl/rng.hpp"
#include "danl/vec.hpp"

namespace oracle {

inline Eigen::MatrixXd to_eigen(const danl::SymMatrix& m) {
  const int d = m.dim();
  Eigen::MatrixXd out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = m(i, j);
  return out;
}

inline danl::SymMatrix random_sym(int d, danl::Rng& rng, double scale = 1.0) {
  std::vector<double> raw(static_cast<std::size_t>(d) * d);
  for (auto& v : raw) v = scale * rng.normal();
  return danl::SymMatrix::from_dense(d, raw);
}

// SPD with minimum eigenvalue >= floor.
inline danl::SymMatrix random_spd(int d, danl::Rng& rng, double floor = 1.0) {
  std::vector<double> b(static_cast<std::size_t>(d) * d);
  for (auto& v : b) v = rng.normal();
  std::vector<double> raw(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k)
        s += b[static_cast<std::size_t>(k) * d + i] *
             b[static_cast<std::size_t>(k) * d + j];
      raw[static_cast<std::size_t>(i) * d + j] = s / d + (i == j ? floor : 0.0);
    }
  return danl::SymMatrix::from_dense(d, raw);
}

// Exact linear solve via Eigen's LDLT; the check for factor_spd/solve.
inline danl::ModelVector eigen_solve(const danl::SymMatrix& h,
                                     const danl::ModelVector& g) {
  const Eigen::MatrixXd m = to_eigen(h);
  Eigen::VectorXd rhs(h.dim());
  for (int i = 0; i < h.dim(); ++i) rhs(i) = g[i];
  const Eigen::VectorXd x = m.ldlt().solve(rhs);
  return {x.data(), x.data() + x.size()};
}

inline double min_eigenvalue(const danl::SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m));
  return es.eigenvalues().minCoeff();
}

// Eigen route for the PSD-cone projection, for cross-checking project_psd.
inline Eigen::MatrixXd eigen_project(const danl::SymMatrix& a, double mu) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(a));
  Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(mu);
  return es.eigenvectors() * clipped.asDiagonal() *
         es.eigenvectors().transpose();
}

// Central finite difference of a scalar function.
inline danl::ModelVector fd_gradient(
    const std::function<double(const danl::ModelVector&)>& f,
    const danl::ModelVector& w, double h = 1e-5) {
  danl::ModelVector g(w.size());
  danl::ModelVector probe = w;
  for (std::size_t j = 0; j < w.size(); ++j) {
    probe[j] = w[j] + h;
    const double up = f(probe);
    probe[j] = w[j] - h;
    const double down = f(probe);
    probe[j] = w[j];
    g[j] = (up - down) / (2.0 * h);
  }
  return g;
}

// Central finite difference of a vector function (column j = df/dw_j).
inline std::vector<danl::ModelVector> fd_jacobian(
    const std::function<danl::ModelVector(const danl::ModelVector&)>& f,
    const danl::ModelVector& w, double h = 1e-5) {
  std::vector<danl::ModelVector> cols(w.size());
  danl::ModelVector probe = w;
  for (std::size_t j = 0; j < w.size(); ++j) {
    probe[j] = w[j] + h;
    const danl::ModelVector up = f(probe);
    probe[j] = w[j] - h;
    const danl::ModelVector down = f(probe);
    probe[j] = w[j];
    danl::ModelVector col(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
      col[i] = (up[i] - down[i]) / (2.0 * h);
    cols[j] = col;
  }
  return cols;
}

// Brute-force recomputation of ψ*, S*, γᵗ straight from raw assignments,
// independent of CoverageLedger's incremental bookkeeping.
struct BruteStats {
  int psi_star;
  int s_star;
  std::vector<int> gamma_t;
};

inline BruteStats brute_coverage(
    const std::vector<danl::MaskAssignment>& history, int n_workers,
    int n_regions) {
  BruteStats out{n_workers, n_regions, {}};
  std::vector<std::vector<int>> last(n_workers, std::vector<int>(n_regions, 0));
  for (const auto& a : history) {
    const auto trained = a.trained_regions();
    out.s_star = std::min(out.s_star, static_cast<int>(trained.size()));
    for (int q : trained)
      out.psi_star = std::min(
          out.psi_star, static_cast<int>(a.workers_for_region(q).size()));
    for (int i = 0; i < n_workers; ++i)
      for (int q : a.regions_per_worker[i]) last[i][q] = a.round;
    int gamma = 0;
    for (int i = 0; i < n_workers; ++i)
      for (int q = 0; q < n_regions; ++q)
        gamma = std::max(gamma, a.round - last[i][q]);
    out.gamma_t.push_back(gamma);
  }
  return out;
}

// Random small logistic instance for calculus checks.
inline danl::Shard random_shard(int d, int m, danl::Rng& rng) {
  danl::Shard shard;
  shard.dim = d;
  for (int s = 0; s < m; ++s) {
    danl::Sample sample;
    for (int j = 0; j < d; ++j)
      if (rng.uniform01() < 0.7) sample.features.emplace_back(j, rng.normal());
    if (sample.features.empty()) sample.features.emplace_back(0, 1.0);
    sample.label = rng.uniform01() < 0.5 ? 1 : 0;
    shard.samples.push_back(std::move(sample));
  }
  return shard;
}

inline danl::ModelVector random_vector(int d, danl::Rng& rng,
                                       double scale = 1.0) {
  danl::ModelVector w(d);
  for (auto& v : w) v = scale * rng.normal();
  return w;
}

}  // namespace oracle
