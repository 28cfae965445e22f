#pragma once

#include <array>
#include <vector>

namespace motifbp {

// (P(+1), P(-1)).
using NodeDistribution = std::array<double, 2>;

// Over (x_i, x_j, x_k) in the order +++, ++-, +-+, +--, -++, -+-, --+, ---;
// entry index is 4*b_i + 2*b_j + b_k with b = 1 meaning spin -1.
using TriangleDistribution = std::array<double, 8>;

inline int spin_of_bit(int bit) { return bit ? -1 : 1; }

struct Beliefs {
  std::vector<NodeDistribution> one_node;
  std::vector<TriangleDistribution> three_node;
};

}  // namespace motifbp
