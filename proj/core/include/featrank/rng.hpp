#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>

namespace featrank {

/// Counter-based generator: output i is splitmix64(key + i * golden). The
/// stream depends only on the key, so results are identical across platforms
/// and standard-library implementations.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  /// Key derived from a sequence of integers, e.g. {seed, repeat, class}.
  static CounterRng keyed(std::initializer_list<std::uint64_t> parts);

  std::uint64_t next();

  /// Uniform integer in [0, bound), bound > 0. Rejection sampling, no bias.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  void shuffle(std::span<int> values);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace featrank
