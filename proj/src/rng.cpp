#include "onebit/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace onebit {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed) : engine_(mix64(seed)) {}

RngStream RngStream::derived(std::uint64_t master,
                             std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = mix64(master);
  for (std::uint64_t key : keys) {
    h = mix64(h ^ mix64(key));
  }
  return RngStream(h);
}

double RngStream::gaussian() { return normal_(engine_); }

std::size_t RngStream::uniform_index(std::size_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("uniform_index: bound must be positive");
  }
  std::uniform_int_distribution<std::size_t> dist(0, bound - 1);
  return dist(engine_);
}

std::vector<int> RngStream::sample_without_replacement(
    const std::vector<int>& pool, int count) {
  if (count < 0 || static_cast<std::size_t>(count) > pool.size()) {
    throw std::invalid_argument(
        "sample_without_replacement: count out of range");
  }
  // Partial Fisher-Yates over a copy; the first `count` slots are the sample.
  std::vector<int> items(pool);
  for (int i = 0; i < count; ++i) {
    const std::size_t j = i + uniform_index(items.size() - i);
    std::swap(items[i], items[j]);
  }
  items.resize(count);
  std::sort(items.begin(), items.end());
  return items;
}

}  // namespace onebit
