#include "firesquad/sampling.hpp"

#include <stdexcept>

namespace firesquad {

double radical_inverse(std::uint64_t index, unsigned base) {
  if (base < 2) throw std::invalid_argument("radical_inverse: base must be >= 2");
  const double inv_base = 1.0 / base;
  double scale = inv_base;
  double result = 0.0;
  while (index > 0) {
    result += static_cast<double>(index % base) * scale;
    index /= base;
    scale *= inv_base;
  }
  return result;
}

Vec2 halton(std::uint64_t index) { return {radical_inverse(index, 2), radical_inverse(index, 3)}; }

Vec2 hammersley(std::uint64_t i, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("hammersley: n must be positive");
  const std::uint64_t k = i % n;
  return {static_cast<double>(k) / static_cast<double>(n), radical_inverse(k, 2)};
}

std::vector<Vec2> hammersley_set(std::uint64_t n, std::uint64_t start_offset) {
  std::vector<Vec2> out;
  out.reserve(n);
  for (std::uint64_t i = 1; i <= n; ++i) out.push_back(hammersley(i + start_offset, n));
  return out;
}

}  // namespace firesquad
