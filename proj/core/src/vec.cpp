#include "danl/vec.hpp"

#include <cmath>
#include <stdexcept>

namespace danl {

double dot(const ModelVector& a, const ModelVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(const ModelVector& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

double l2_norm(const ModelVector& a) { return std::sqrt(squared_norm(a)); }

double squared_distance(const ModelVector& a, const ModelVector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("squared_distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

ModelVector apply_mask(const ModelVector& a, const Mask& mask) {
  if (a.size() != mask.size())
    throw std::invalid_argument("apply_mask: dimension mismatch");
  ModelVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = mask[i] ? a[i] : 0.0;
  return out;
}

}  // namespace danl
