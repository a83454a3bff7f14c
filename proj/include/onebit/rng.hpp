#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace onebit {

/// splitmix64 finalizer, used to turn structured key material
/// (seed, measurement count, trial index, ...) into well-mixed seeds.
std::uint64_t mix64(std::uint64_t z);

/// Seedable, splittable stream of random draws.
///
/// Every consumer owns its own stream. Substreams derived from the same
/// key material are bit-identical across runs and independent of execution
/// order, which is what makes sweeps reproducible under any worker count.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  /// Substream keyed by (master, key_0, key_1, ...).
  static RngStream derived(std::uint64_t master,
                           std::initializer_list<std::uint64_t> keys);

  /// Standard normal draw.
  double gaussian();

  /// Uniform integer in [0, bound). bound must be positive.
  std::size_t uniform_index(std::size_t bound);

  /// `count` distinct elements of `pool`, uniformly without replacement,
  /// returned sorted ascending.
  std::vector<int> sample_without_replacement(const std::vector<int>& pool,
                                              int count);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace onebit
