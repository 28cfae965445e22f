#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "motifbp/beliefs.hpp"
#include "motifbp/instance.hpp"

namespace motifbp {

// Spin-to-triangle message nu_{i -> T} for the vertex at `position` of `triangle`.
struct DirectedPair {
  TriangleIndex triangle = 0;
  std::size_t position = 0;
};

// One value in [-1, 1] per directed (vertex, incident triangle) pair,
// stored at 3 * triangle + position.
class Messages {
 public:
  Messages() = default;
  Messages(std::size_t n_triangles, double value);
  // Throws InvalidInput if any entry lies outside [-1, 1] or is not finite.
  static Messages from_values(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  std::size_t n_triangles() const { return values_.size() / 3; }

  double operator[](std::size_t index) const { return values_[index]; }
  double& operator[](std::size_t index) { return values_[index]; }
  double at(DirectedPair p) const { return values_[3 * p.triangle + p.position]; }
  double& at(DirectedPair p) { return values_[3 * p.triangle + p.position]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double min() const;
  double max() const;
  // max_i |a_i - b_i|
  friend double max_abs_diff(const Messages& a, const Messages& b);
  friend bool operator==(const Messages&, const Messages&) = default;

 private:
  std::vector<double> values_;
};

enum class Schedule { synchronous, sequential };

struct BPConfig {
  Schedule schedule = Schedule::synchronous;
  double tolerance = 1e-10;
  std::size_t max_iters = 10000;
  double damping = 0.0;
  double init_value = 1.0;
  bool record_trace = false;

  void validate() const;
};

struct BPRunResult {
  Messages final_messages;
  bool converged = false;
  std::size_t iterations = 0;
  // Max-abs message change of each sweep.
  std::vector<double> residual_trace;
  // Dual free energy (nu-form) and message range after each sweep.
  std::vector<double> dual_nu_trace;
  std::vector<double> min_message_trace;
  std::vector<double> max_message_trace;
  // Populated when BPConfig::record_trace; entry 0 is the initial vector.
  std::optional<std::vector<Messages>> message_trace;
  // nu^(t) <= nu^(t-1) + 1e-12 in every coordinate, for every t.
  bool monotone_decreasing = true;
};

inline constexpr double kMonotoneSlack = 1e-12;
inline constexpr double kMessageClamp = 1e-12;

Messages init_messages(const Instance& instance, double value);

// phi(nu) for a single directed pair; does not modify `messages`.
double update_message(const Instance& instance, const Messages& messages, DirectedPair target);

// Full synchronous map phi applied to every pair.
Messages bp_map(const Instance& instance, const Messages& messages);

// One sweep under `config` (schedule and damping).
Messages sweep(const Instance& instance, const Messages& messages, const BPConfig& config);

BPRunResult run_bp(const Instance& instance, const BPConfig& config);
// Same, from an explicit starting vector instead of config.init_value.
BPRunResult run_bp(const Instance& instance, const BPConfig& config, Messages start);

// atanh of nu after clamping into [-1 + 1e-12, 1 - 1e-12].
double clamped_atanh(double nu);

// Total cavity field m_i = beta*h_i + sum over all incident triangles.
double local_field(const Instance& instance, const Messages& messages, VertexId vertex);

NodeDistribution node_marginal(const Instance& instance, const Messages& messages, VertexId vertex);
TriangleDistribution triangle_belief(const Instance& instance, const Messages& messages, TriangleIndex triangle);
Beliefs beliefs_from_messages(const Instance& instance, const Messages& messages);

}  // namespace motifbp
