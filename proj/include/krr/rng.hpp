#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace krr {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Sub-stream seed for iteration `stream` of a run seeded with `seed`.
/// Iterations seeded this way are independent of evaluation order, so a
/// parallel run reproduces the sequential one.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(seed + (stream + 1) * 0x9e3779b97f4a7c15ULL);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

/// Unbiased draw from [0, bound) by rejection. Pinned here rather than using
/// std::uniform_int_distribution, whose output is implementation-defined.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

/// First `count` elements of a seeded Fisher-Yates pass over 0..population-1:
/// a uniform sample without replacement, in sampled order.
inline std::vector<int> sample_without_replacement(int population, int count, Rng& rng) {
  std::vector<int> pool(static_cast<std::size_t>(population));
  for (int i = 0; i < population; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < count; ++i) {
    const auto j = i + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(population - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(count));
  return pool;
}

}  // namespace krr
