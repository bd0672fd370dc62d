#pragma once

#include "featrank/types.hpp"

#include <span>
#include <vector>

namespace featrank::mi {

struct DiscreteColumn {
  std::vector<int> codes;
  int bin_count = 1;
};

/// Equal-frequency binning: a value whose first sorted position is r gets bin
/// floor(r * bins / n), so tied values always share a bin. Bins left empty by
/// ties are dropped and the codes renumbered densely, so bin_count may be
/// smaller than `bins`.
DiscreteColumn discretize_equal_frequency(std::span<const double> x, int bins);
DiscreteColumn discretize_equal_frequency(const Vector& x, int bins);

/// Wraps already-discrete codes (class labels). Codes must be >= 0.
DiscreteColumn from_codes(std::span<const int> codes);

/// Plug-in estimate sum p(a,b) ln[p(a,b) / (p(a) p(b))] in nats.
double mutual_information(const DiscreteColumn& a, const DiscreteColumn& b);

/// Plug-in entropy in nats.
double entropy(const DiscreteColumn& a);

}  // namespace featrank::mi
