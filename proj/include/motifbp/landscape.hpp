#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "motifbp/bethe.hpp"
#include "motifbp/bp.hpp"
#include "motifbp/instance.hpp"

namespace motifbp {

// 1/x + x - 2 f(x) (1 + C (1 - x / f(x))), with the scalar surrogate
// f(x) = tanh(h + degree * atanh(theta x^2)). Throws DomainError if x is not
// in (0, 1) or f(x) == 0.
double g_function(double x, double h, std::size_t effective_degree, double theta, double c);

struct PairRoot {
  DirectedPair pair;
  double root = 0.0;
  double c = 0.0;
  std::size_t effective_degree = 0;
  double theta = 0.0;
  double field = 0.0;
  // Approximate locations (bracket midpoints) of every sign change of g on the grid.
  std::vector<double> sign_changes;
};

struct XStarEstimate {
  double value = 0.0;
  std::vector<PairRoot> per_pair;
  // "boundary" when C = 2 / sqrt(q_i q_j), "override" otherwise.
  std::string c_policy = "boundary";
};

struct XStarOptions {
  std::size_t grid_points = 10000;
  double bisection_tol = 1e-12;
  std::optional<double> c_override;
};

// Per directed pair (i -> T): degree q_i - 1, theta_T, field beta*h_i,
// C = 2 / sqrt(q_i * max(q_j, q_k)). The root is the largest grid crossing
// where g goes from > 0 (below) to <= 0 (above), refined by bisection; pairs
// without such a crossing (including theta = 0) get root 0.
XStarEstimate estimate_xstar(const Instance& instance, const XStarOptions& options = {});

enum class Region { pre_fixpoint, post_fixpoint, fixed_point, neither };
std::string to_string(Region region);

struct RegionLabel {
  Region region = Region::neither;
  // First message index breaking pre- (resp. post-) membership, if any.
  std::optional<std::size_t> pre_witness;
  std::optional<std::size_t> post_witness;
};

// pre:  x* <= phi(nu) <= nu + tol,  post: x* <= nu <= phi(nu) + tol, both: fixed point.
RegionLabel classify_point(const Instance& instance, const Messages& messages, double xstar, double tol);

struct AuditReport {
  std::size_t samples = 0;
  std::size_t pre = 0;
  std::size_t post = 0;
  std::size_t fixed = 0;
  std::size_t neither = 0;
  // Largest gradient entry over pre points, largest negated entry over post points.
  double max_pre_violation = 0.0;
  double max_post_violation = 0.0;
  bool passed = true;

  std::size_t classified() const { return pre + post + fixed; }
};

inline constexpr double kAuditClassifyTol = 1e-12;
inline constexpr double kAuditSignTol = 1e-10;

// Samples points in [x*, 1)^n (uniform, along the all-ones BP trajectory, and
// coordinate-wise between the BP fixed point and 1 or x*), classifies them and
// checks the gradient sign on pre/post points.
AuditReport gradient_sign_audit(const Instance& instance, double xstar, std::size_t samples, std::uint64_t seed);

struct CensusPoint {
  Messages messages;
  double dual_nu = 0.0;
  double dual_lambda = 0.0;
  double residual = 0.0;
  std::vector<std::string> reached_from;
  bool in_region = false;  // every coordinate >= x*
  bool dominated = false;  // coordinate-wise <= the all-ones fixed point
};

struct FixedPointCensus {
  std::vector<CensusPoint> fixed_points;  // sorted by dual_nu descending, then messages
  std::optional<std::size_t> dominant;    // point reached from all-ones
  std::size_t runs = 0;
  std::size_t nonconverged = 0;
  bool dominance_holds = true;   // over points in [x*, 1)^n
  double max_dual_nu_gap = 0.0;  // max_k dual_nu(k) - dual_nu(dominant)
  bool optimal = false;          // gap <= 1e-9
};

inline constexpr double kCensusDedupTol = 1e-7;
inline constexpr double kCensusResidualTol = 1e-8;
inline constexpr double kDominanceSlack = 1e-9;
inline constexpr double kOptimalityTol = 1e-9;

// BP from all-ones, n_inits uniform starts in (0,1)^n and n_inits in (-1,1)^n.
FixedPointCensus fixed_point_census(const Instance& instance, std::size_t n_inits, std::uint64_t seed,
                                    const BPConfig& bp_config, double xstar);

// Central differences of dual_free_energy_nu. Every |nu| must be <= 1 - 2*step.
DualGradient finite_diff_gradient(const Instance& instance, const Messages& messages, double step);

struct ProbeReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst = 0.0;  // largest shortfall below the required inequality
};

inline constexpr double kProbeTol = 1e-10;

// x >= y in [x*, 1)^n must give phi(x) >= phi(y).
ProbeReport monotonicity_probe(const Instance& instance, double xstar, std::size_t samples, std::uint64_t seed);
// phi(t x + (1-t) y) >= t phi(x) + (1-t) phi(y) for x, y in [x*, 1)^n.
ProbeReport concavity_probe(const Instance& instance, double xstar, std::size_t samples, std::uint64_t seed);

}  // namespace motifbp
