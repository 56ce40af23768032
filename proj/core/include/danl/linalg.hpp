#pragma once

#include <vector>

#include "danl/vec.hpp"

namespace danl {

/// Dense symmetric matrix with full row-major storage.
/// Construction symmetrizes as (M + Mᵀ)/2 and rejects non-finite entries,
/// so floating-point asymmetry from accumulation can never leak out.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int dim);  // zero matrix
  static SymMatrix identity(int dim);
  static SymMatrix from_dense(int dim, const std::vector<double>& row_major);

  int dim() const { return dim_; }
  double operator()(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * dim_ + j];
  }
  // Writes both (i, j) and (j, i).
  void set(int i, int j, double v);
  // this += s * other
  void add_scaled(const SymMatrix& other, double s);
  void scale(double s);

  ModelVector matvec(const ModelVector& x) const;
  double frobenius_norm() const;
  double max_abs() const;
  const std::vector<double>& data() const { return a_; }

 private:
  int dim_ = 0;
  std::vector<double> a_;
};

/// Result of sym_eig: eigenvalues sorted descending, orthonormal eigenvectors
/// stored row-major with column k holding the k-th eigenvector.
struct EigenDecomposition {
  int dim = 0;
  std::vector<double> eigenvalues;
  std::vector<double> vectors;

  double vector(int i, int k) const {
    return vectors[static_cast<std::size_t>(i) * dim + k];
  }
};

/// Cholesky factor of an SPD matrix. Factor once, solve every round.
class SpdFactorization {
 public:
  SpdFactorization() = default;
  int dim() const { return dim_; }
  ModelVector solve(const ModelVector& g) const;

 private:
  friend SpdFactorization factor_spd(const SymMatrix& h);
  int dim_ = 0;
  std::vector<double> lower_;  // row-major, strictly lower + diagonal used
};

/// Cyclic Jacobi eigendecomposition. Converges when the off-diagonal norm
/// drops below 1e-12·‖A‖_F; throws NumericalError after 100 sweeps.
EigenDecomposition sym_eig(const SymMatrix& a);

/// Projection [A]_mu = [A − μI]₀ + μI onto {H = Hᵀ : μI ⪯ H}: eigenvalues
/// below μ are raised to μ. Returns A unchanged when already in the cone.
SymMatrix project_psd(const SymMatrix& a, double mu);

/// Cholesky factorization; throws NumericalError naming the failing pivot
/// index when H is not positive definite.
SpdFactorization factor_spd(const SymMatrix& h);

ModelVector solve(const SpdFactorization& f, const ModelVector& g);

}  // namespace danl
