#include "featrank/mi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace featrank::mi {

DiscreteColumn discretize_equal_frequency(std::span<const double> x, int bins) {
  if (x.empty()) throw InputError("discretize: empty column");
  if (bins < 1) throw InputError("discretize: bins must be >= 1");
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

  std::vector<int> raw(n);
  std::size_t first = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (r > 0 && x[order[r]] != x[order[r - 1]]) first = r;
    raw[order[r]] = static_cast<int>(first * static_cast<std::size_t>(bins) / n);
  }

  // Dense renumbering; raw codes are monotone in value so order is kept.
  std::vector<int> remap(static_cast<std::size_t>(bins), -1);
  int next = 0;
  for (std::size_t r = 0; r < n; ++r) {
    int& slot = remap[static_cast<std::size_t>(raw[order[r]])];
    if (slot < 0) slot = next++;
  }
  DiscreteColumn out;
  out.codes.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.codes[i] = remap[static_cast<std::size_t>(raw[i])];
  out.bin_count = next;
  return out;
}

DiscreteColumn discretize_equal_frequency(const Vector& x, int bins) {
  return discretize_equal_frequency(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
                                    bins);
}

DiscreteColumn from_codes(std::span<const int> codes) {
  DiscreteColumn out;
  out.codes.assign(codes.begin(), codes.end());
  int hi = 0;
  for (int c : codes) {
    if (c < 0) throw InputError("from_codes: negative code");
    hi = std::max(hi, c);
  }
  out.bin_count = hi + 1;
  return out;
}

double mutual_information(const DiscreteColumn& first, const DiscreteColumn& second) {
  if (first.codes.size() != second.codes.size()) {
    throw InputError("mutual_information: columns differ in length");
  }
  // Canonical argument order makes the result exactly symmetric.
  const bool swap = std::tie(second.bin_count, second.codes) < std::tie(first.bin_count, first.codes);
  const DiscreteColumn& a = swap ? second : first;
  const DiscreteColumn& b = swap ? first : second;
  const std::size_t n = a.codes.size();
  if (n == 0) return 0.0;
  const auto ka = static_cast<std::size_t>(a.bin_count);
  const auto kb = static_cast<std::size_t>(b.bin_count);
  std::vector<double> joint(ka * kb, 0.0);
  std::vector<double> pa(ka, 0.0);
  std::vector<double> pb(kb, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ca = static_cast<std::size_t>(a.codes[i]);
    const auto cb = static_cast<std::size_t>(b.codes[i]);
    joint[ca * kb + cb] += 1.0;
    pa[ca] += 1.0;
    pb[cb] += 1.0;
  }
  const double nd = static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < ka; ++i) {
    for (std::size_t j = 0; j < kb; ++j) {
      const double c = joint[i * kb + j];
      if (c == 0.0) continue;
      acc += c * std::log(nd * c / (pa[i] * pb[j]));
    }
  }
  return std::max(acc / nd, 0.0);
}

double entropy(const DiscreteColumn& a) {
  const std::size_t n = a.codes.size();
  if (n == 0) return 0.0;
  std::vector<double> counts(static_cast<std::size_t>(a.bin_count), 0.0);
  for (int c : a.codes) counts[static_cast<std::size_t>(c)] += 1.0;
  const double nd = static_cast<double>(n);
  double acc = 0.0;
  for (double c : counts) {
    if (c > 0.0) acc -= c * std::log(c / nd);
  }
  return acc / nd;
}

}  // namespace featrank::mi
