#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "motifbp/beliefs.hpp"
#include "motifbp/instance.hpp"

namespace motifbp {

inline constexpr std::size_t kMaxEnumerationVertices = 24;

struct ExactResult {
  double log_partition = 0.0;
  std::vector<NodeDistribution> one_node_marginals;
  std::vector<TriangleDistribution> three_node_marginals;

  Beliefs as_beliefs() const { return {one_node_marginals, three_node_marginals}; }
};

// Brute force over all 2^n configurations. Throws SizeGuardError for n > 24.
ExactResult enumerate(const Instance& instance);

// P(x) = exp(-beta E(x)) / Z, indexed like Configuration::from_bits.
std::vector<double> boltzmann_distribution(const Instance& instance);

// G(P) = -beta * sum_x P(x) E(x) - sum_x P(x) log P(x).
double gibbs_free_energy(const Instance& instance, std::span<const double> joint);

}  // namespace motifbp
