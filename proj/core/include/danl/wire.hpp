#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "danl/protocol.hpp"

namespace danl {

// Canonical message byte layout, little-endian throughout. The simulator
// passes reports in-process; this is the frame a networked transport reuses.
//
//   GradientReport:
//     u32 worker_id | u32 round | u32 n_regions
//     then per region, ascending: u32 region_id | u32 len | len × f64
//
//   HessianReport:
//     u32 worker_id | u32 dim | dim × f64 gradient | dim² × f64 Hessian
//     (Hessian row-major)
//
// Floating-point values are IEEE-754 binary64 bit patterns.

std::vector<std::uint8_t> encode(const GradientReport& report);
GradientReport decode_gradient_report(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode(const HessianReport& report);
HessianReport decode_hessian_report(std::span<const std::uint8_t> bytes);

}  // namespace danl
