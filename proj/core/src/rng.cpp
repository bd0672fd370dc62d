#include "featrank/rng.hpp"

#include <utility>

namespace featrank {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

CounterRng CounterRng::keyed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6A09E667F3BCC909ULL;
  for (auto p : parts) h = splitmix64(h ^ splitmix64(p));
  return CounterRng(h);
}

std::uint64_t CounterRng::next() {
  return splitmix64(key_ + 0x9E3779B97F4A7C15ULL * ++counter_);
}

std::uint64_t CounterRng::below(std::uint64_t bound) {
  // Largest multiple of bound representable; reject the tail.
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound);
  std::uint64_t r = next();
  while (r >= limit) r = next();
  return r % bound;
}

double CounterRng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

void CounterRng::shuffle(std::span<int> values) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(below(i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace featrank
