#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "motifbp/instance.hpp"

namespace motifbp {

enum class GeneratorKind { triangle_tree, random_motif, shared_edge_chain };

std::string to_string(GeneratorKind kind);
GeneratorKind generator_kind_from_string(const std::string& name);

// Uniform on [min, max]; a constant when min == max (no random draw is consumed).
struct ValueLaw {
  double min = 0.0;
  double max = 0.0;

  static ValueLaw constant(double v) { return {v, v}; }
  static ValueLaw uniform(double lo, double hi) { return {lo, hi}; }
  bool is_constant() const { return min == max; }
};

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::triangle_tree;
  std::size_t n_triangles = 1;
  // random_motif only; ignored by the other kinds.
  std::size_t n_vertices = 0;
  ValueLaw coupling = ValueLaw::constant(1.0);
  ValueLaw field = ValueLaw::constant(0.0);
  double beta = 1.0;
  std::uint64_t seed = 0;
  bool ferromagnetic = true;

  void validate() const;
};

// Hypertree: each new triangle shares exactly one (uniformly chosen) existing vertex.
Instance gen_triangle_tree(const GeneratorSpec& spec);

// random_motif: distinct uniform triples on n_vertices vertices.
// shared_edge_chain: triangles (t, t+1, t+2), consecutive ones share two vertices.
Instance gen_random_motif(const GeneratorSpec& spec);

// Dispatches on spec.kind.
Instance generate(const GeneratorSpec& spec);

}  // namespace motifbp
