#include "danl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "danl/error.hpp"

namespace danl {

namespace {

constexpr int kMaxJacobiSweeps = 100;
constexpr double kJacobiTolerance = 1e-12;

std::size_t at(int d, int i, int j) {
  return static_cast<std::size_t>(i) * d + j;
}

double off_diagonal_norm(const std::vector<double>& a, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) s += a[at(d, i, j)] * a[at(d, i, j)];
  return std::sqrt(2.0 * s);
}

}  // namespace

SymMatrix::SymMatrix(int dim)
    : dim_(dim), a_(static_cast<std::size_t>(dim) * dim, 0.0) {
  if (dim <= 0) throw std::invalid_argument("SymMatrix: dim must be positive");
}

SymMatrix SymMatrix::identity(int dim) {
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.a_[at(dim, i, i)] = 1.0;
  return m;
}

SymMatrix SymMatrix::from_dense(int dim, const std::vector<double>& row_major) {
  if (row_major.size() != static_cast<std::size_t>(dim) * dim)
    throw std::invalid_argument("SymMatrix::from_dense: buffer size mismatch");
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = 0.5 * (row_major[at(dim, i, j)] + row_major[at(dim, j, i)]);
      if (!std::isfinite(v))
        throw std::invalid_argument("SymMatrix: non-finite entry");
      m.a_[at(dim, i, j)] = v;
      m.a_[at(dim, j, i)] = v;
    }
  }
  return m;
}

void SymMatrix::set(int i, int j, double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("SymMatrix::set: non-finite");
  a_[at(dim_, i, j)] = v;
  a_[at(dim_, j, i)] = v;
}

void SymMatrix::add_scaled(const SymMatrix& other, double s) {
  if (other.dim_ != dim_)
    throw std::invalid_argument("SymMatrix::add_scaled: dimension mismatch");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += s * other.a_[k];
}

void SymMatrix::scale(double s) {
  for (double& v : a_) v *= s;
}

ModelVector SymMatrix::matvec(const ModelVector& x) const {
  if (x.size() != static_cast<std::size_t>(dim_))
    throw std::invalid_argument("SymMatrix::matvec: dimension mismatch");
  ModelVector y(dim_, 0.0);
  for (int i = 0; i < dim_; ++i) {
    double s = 0.0;
    for (int j = 0; j < dim_; ++j) s += a_[at(dim_, i, j)] * x[j];
    y[i] = s;
  }
  return y;
}

double SymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

EigenDecomposition sym_eig(const SymMatrix& a_in) {
  const int d = a_in.dim();
  std::vector<double> a = a_in.data();
  std::vector<double> v(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) v[at(d, i, i)] = 1.0;

  const double threshold = kJacobiTolerance * a_in.frobenius_norm();
  double off = off_diagonal_norm(a, d);
  int sweeps = 0;
  while (off > threshold) {
    if (sweeps++ == kMaxJacobiSweeps) {
      std::ostringstream msg;
      msg << "sym_eig: Jacobi did not converge after " << kMaxJacobiSweeps
          << " sweeps; off-diagonal norm " << off << " exceeds threshold "
          << threshold;
      throw NumericalError(msg.str());
    }
    for (int p = 0; p < d - 1; ++p) {
      for (int q = p + 1; q < d; ++q) {
        const double apq = a[at(d, p, q)];
        if (apq == 0.0) continue;
        const double tau = (a[at(d, q, q)] - a[at(d, p, p)]) / (2.0 * apq);
        double t;
        if (std::abs(tau) > 1e150) {
          t = 0.5 / tau;  // avoids tau² overflow
        } else {
          t = (tau >= 0.0 ? 1.0 : -1.0) /
              (std::abs(tau) + std::sqrt(tau * tau + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < d; ++k) {
          if (k == p || k == q) continue;
          const double akp = a[at(d, k, p)];
          const double akq = a[at(d, k, q)];
          a[at(d, k, p)] = a[at(d, p, k)] = c * akp - s * akq;
          a[at(d, k, q)] = a[at(d, q, k)] = s * akp + c * akq;
        }
        const double app = a[at(d, p, p)];
        const double aqq = a[at(d, q, q)];
        a[at(d, p, p)] = app - t * apq;
        a[at(d, q, q)] = aqq + t * apq;
        a[at(d, p, q)] = a[at(d, q, p)] = 0.0;
        for (int k = 0; k < d; ++k) {
          const double vkp = v[at(d, k, p)];
          const double vkq = v[at(d, k, q)];
          v[at(d, k, p)] = c * vkp - s * vkq;
          v[at(d, k, q)] = s * vkp + c * vkq;
        }
      }
    }
    off = off_diagonal_norm(a, d);
  }

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return a[at(d, x, x)] > a[at(d, y, y)]; });

  EigenDecomposition out;
  out.dim = d;
  out.eigenvalues.resize(d);
  out.vectors.resize(static_cast<std::size_t>(d) * d);
  for (int k = 0; k < d; ++k) {
    out.eigenvalues[k] = a[at(d, order[k], order[k])];
    for (int i = 0; i < d; ++i) out.vectors[at(d, i, k)] = v[at(d, i, order[k])];
  }
  return out;
}

SymMatrix project_psd(const SymMatrix& a, double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu))
    throw std::invalid_argument("project_psd: mu must be finite and >= 0");
  const EigenDecomposition eig = sym_eig(a);
  const int d = a.dim();
  if (eig.eigenvalues.back() >= mu) return a;  // already in the cone

  std::vector<double> clipped(d);
  for (int k = 0; k < d; ++k) clipped[k] = std::max(eig.eigenvalues[k], mu);

  std::vector<double> m(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k)
        s += clipped[k] * eig.vector(i, k) * eig.vector(j, k);
      m[at(d, i, j)] = s;
      m[at(d, j, i)] = s;
    }
  }
  return SymMatrix::from_dense(d, m);
}

SpdFactorization factor_spd(const SymMatrix& h) {
  const int d = h.dim();
  SpdFactorization f;
  f.dim_ = d;
  f.lower_.assign(static_cast<std::size_t>(d) * d, 0.0);
  auto& l = f.lower_;
  for (int j = 0; j < d; ++j) {
    double s = h(j, j);
    for (int k = 0; k < j; ++k) s -= l[at(d, j, k)] * l[at(d, j, k)];
    if (!(s > 0.0) || !std::isfinite(s)) {
      std::ostringstream msg;
      msg << "factor_spd: non-positive pivot " << s << " at index " << j;
      throw NumericalError(msg.str());
    }
    l[at(d, j, j)] = std::sqrt(s);
    for (int i = j + 1; i < d; ++i) {
      double v = h(i, j);
      for (int k = 0; k < j; ++k) v -= l[at(d, i, k)] * l[at(d, j, k)];
      l[at(d, i, j)] = v / l[at(d, j, j)];
    }
  }
  return f;
}

ModelVector SpdFactorization::solve(const ModelVector& g) const {
  const int d = dim_;
  if (g.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("SpdFactorization::solve: dimension mismatch");
  ModelVector y(d);
  for (int i = 0; i < d; ++i) {
    double s = g[i];
    for (int k = 0; k < i; ++k) s -= lower_[at(d, i, k)] * y[k];
    y[i] = s / lower_[at(d, i, i)];
  }
  ModelVector x(d);
  for (int i = d - 1; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < d; ++k) s -= lower_[at(d, k, i)] * x[k];
    x[i] = s / lower_[at(d, i, i)];
  }
  return x;
}

ModelVector solve(const SpdFactorization& f, const ModelVector& g) {
  return f.solve(g);
}

}  // namespace danl
