#pragma once

#include <cstdint>
#include <vector>

namespace danl {

// The dense global parameter vector and its pruned variants.
using ModelVector = std::vector<double>;

// Binary pruning mask over parameter indices; 1 = trained.
using Mask = std::vector<std::uint8_t>;

double dot(const ModelVector& a, const ModelVector& b);
double squared_norm(const ModelVector& a);
double l2_norm(const ModelVector& a);
double squared_distance(const ModelVector& a, const ModelVector& b);

// a ⊙ mask
ModelVector apply_mask(const ModelVector& a, const Mask& mask);

}  // namespace danl
