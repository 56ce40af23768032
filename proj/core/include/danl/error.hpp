#pragma once

#include <stdexcept>
#include <string>

namespace danl {

// Bad user input: unreadable files, invalid configuration values.
// The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown or violated run-time constraint (failed factorization,
// non-convergent eigensolver, infeasible mask budget, divergence guard).
// The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace danl
