#pragma once

// Deterministic low-discrepancy point sequences on the unit square.

#include <cstdint>
#include <vector>

#include "firesquad/geometry.hpp"

namespace firesquad {

// Van der Corput radical inverse of index in the given base (base >= 2).
double radical_inverse(std::uint64_t index, unsigned base);

// Halton point (bases 2 and 3) for index >= 0.
Vec2 halton(std::uint64_t index);

// The i-th point of an n-point Hammersley set: (k / n, radical_inverse_2(k))
// with k = i mod n, so i = 1..n enumerates the set ending at (0, 0).
Vec2 hammersley(std::uint64_t i, std::uint64_t n);
std::vector<Vec2> hammersley_set(std::uint64_t n, std::uint64_t start_offset = 0);

}  // namespace firesquad
