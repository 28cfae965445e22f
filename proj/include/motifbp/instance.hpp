#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace motifbp {

using VertexId = std::size_t;
using TriangleIndex = std::size_t;

// A three-spin interaction. Vertices are kept sorted; theta = tanh(beta * coupling).
struct Triangle {
  std::array<VertexId, 3> vertices{};
  double coupling = 0.0;
  double theta = 0.0;
};

// Where a vertex sits in the triangle list: triangle index and slot 0..2.
struct Incidence {
  TriangleIndex triangle = 0;
  std::size_t position = 0;
};

// Raw, unvalidated description of an instance (what the JSON file holds).
struct InstanceDescription {
  struct TriangleSpec {
    std::array<long long, 3> vertices{};
    double coupling = 0.0;
  };
  std::vector<double> fields;
  std::vector<TriangleSpec> triangles;
  std::optional<double> beta;
};

// Spin configuration, entries are +1 or -1.
class Configuration {
 public:
  explicit Configuration(std::vector<int> spins);
  static Configuration all_plus(std::size_t n);
  // Bit v of `bits` set means vertex v is -1.
  static Configuration from_bits(std::size_t n, unsigned long long bits);

  std::span<const int> spins() const { return spins_; }
  std::size_t size() const { return spins_.size(); }
  int operator[](std::size_t v) const { return spins_[v]; }
  Configuration flipped() const;

 private:
  std::vector<int> spins_;
};

// Immutable higher-order Ising instance on a triangle hypergraph.
class Instance {
 public:
  std::size_t n_vertices() const { return fields_.size(); }
  std::size_t n_triangles() const { return triangles_.size(); }
  std::size_t n_messages() const { return 3 * triangles_.size(); }
  double beta() const { return beta_; }

  std::span<const double> fields() const { return fields_; }
  double field(VertexId v) const { return fields_[v]; }
  std::span<const Triangle> triangles() const { return triangles_; }
  const Triangle& triangle(TriangleIndex t) const { return triangles_[t]; }
  std::span<const Incidence> incidence(VertexId v) const { return incidence_[v]; }

  InstanceDescription describe() const;

 private:
  friend Instance build_instance(const InstanceDescription& spec);

  std::vector<double> fields_;
  std::vector<Triangle> triangles_;
  std::vector<std::vector<Incidence>> incidence_;
  double beta_ = 1.0;
};

// Validates `spec` and returns the canonical instance (sorted triples, sorted
// triangle list, cached theta and incidence). Throws InvalidInput.
Instance build_instance(const InstanceDescription& spec);

std::size_t hyper_degree(const Instance& instance, VertexId vertex);

// All couplings and all fields non-negative.
bool is_ferromagnetic(const Instance& instance);

// E(X) = -sum_i h_i X_i - sum_T J_T X_i X_j X_k.
double energy(const Instance& instance, const Configuration& config);

}  // namespace motifbp
