#pragma once

#include "featrank/types.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace featrank::bench {

struct Data {
  Matrix X;
  Labels y;
};

// Standard normal design; the first three columns drive the labels.
inline Data planted(int n, int p, int classes, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Data d{Matrix(n, p), Labels(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) d.X(i, j) = normal(gen);
    const int c = i % classes;
    d.y[static_cast<std::size_t>(i)] = c;
    for (int j = 0; j < std::min(3, p); ++j) d.X(i, j) += 1.5 * (c == j % classes ? 1.0 : 0.0);
  }
  return d;
}

}  // namespace featrank::bench
