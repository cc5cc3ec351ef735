#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace critnet::detail {

inline void hash_combine(std::size_t& seed, std::size_t v) noexcept {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

struct VectorHash {
  template <typename T>
  std::size_t operator()(const std::vector<T>& v) const noexcept {
    std::size_t seed = v.size();
    for (const auto& x : v) hash_combine(seed, static_cast<std::size_t>(x));
    return seed;
  }
};

/// Hash for a tuple of index sets.
struct NestedVectorHash {
  template <typename T>
  std::size_t operator()(const std::vector<std::vector<T>>& v) const noexcept {
    std::size_t seed = v.size();
    for (const auto& inner : v) hash_combine(seed, VectorHash{}(inner));
    return seed;
  }
};

} // namespace critnet::detail
