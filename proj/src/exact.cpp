#include "motifbp/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "motifbp/errors.hpp"

namespace motifbp {

namespace {

// Enumeration is summed in fixed-size blocks, then block totals are added in
// index order. Results are deterministic and more accurate than one running sum.
constexpr std::uint64_t kBlock = 4096;

void guard(const Instance& instance) {
  if (instance.n_vertices() > kMaxEnumerationVertices) {
    throw SizeGuardError("exact enumeration limited to " + std::to_string(kMaxEnumerationVertices) + " vertices, got " +
                         std::to_string(instance.n_vertices()));
  }
}

// -beta * E(x) evaluated straight from the bit pattern.
class LogWeight {
 public:
  explicit LogWeight(const Instance& instance) : beta_(instance.beta()) {
    for (double h : instance.fields()) fields_.push_back(h);
    for (const Triangle& t : instance.triangles()) {
      masks_.push_back((1ULL << t.vertices[0]) | (1ULL << t.vertices[1]) | (1ULL << t.vertices[2]));
      couplings_.push_back(t.coupling);
    }
  }

  double operator()(std::uint64_t bits) const {
    double s = 0.0;
    for (std::size_t v = 0; v < fields_.size(); ++v) s += ((bits >> v) & 1ULL) ? -fields_[v] : fields_[v];
    for (std::size_t t = 0; t < masks_.size(); ++t) s += (std::popcount(bits & masks_[t]) & 1) ? -couplings_[t] : couplings_[t];
    return beta_ * s;
  }

 private:
  double beta_;
  std::vector<double> fields_;
  std::vector<std::uint64_t> masks_;
  std::vector<double> couplings_;
};

double max_log_weight(const LogWeight& lw, std::uint64_t count) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::uint64_t b = 0; b < count; ++b) m = std::max(m, lw(b));
  return m;
}

}  // namespace

ExactResult enumerate(const Instance& instance) {
  guard(instance);
  const std::size_t n = instance.n_vertices();
  const std::size_t nt = instance.n_triangles();
  const std::uint64_t count = 1ULL << n;
  const LogWeight lw(instance);
  const double shift = max_log_weight(lw, count);

  std::vector<std::uint64_t> tri_bits(nt * 3);
  for (std::size_t t = 0; t < nt; ++t) {
    for (std::size_t p = 0; p < 3; ++p) tri_bits[3 * t + p] = instance.triangle(t).vertices[p];
  }

  // accumulators: z, then P(x_v = -1) numerators, then 8 per triangle
  const std::size_t width = 1 + n + 8 * nt;
  std::vector<double> total(width, 0.0), block(width, 0.0);
  for (std::uint64_t start = 0; start < count; start += kBlock) {
    std::fill(block.begin(), block.end(), 0.0);
    const std::uint64_t stop = std::min(count, start + kBlock);
    for (std::uint64_t b = start; b < stop; ++b) {
      const double w = std::exp(lw(b) - shift);
      block[0] += w;
      for (std::size_t v = 0; v < n; ++v) {
        if ((b >> v) & 1ULL) block[1 + v] += w;
      }
      for (std::size_t t = 0; t < nt; ++t) {
        const unsigned c = static_cast<unsigned>(((b >> tri_bits[3 * t]) & 1ULL) << 2 |
                                                 ((b >> tri_bits[3 * t + 1]) & 1ULL) << 1 |
                                                 ((b >> tri_bits[3 * t + 2]) & 1ULL));
        block[1 + n + 8 * t + c] += w;
      }
    }
    for (std::size_t k = 0; k < width; ++k) total[k] += block[k];
  }

  ExactResult r;
  const double z = total[0];
  r.log_partition = shift + std::log(z);
  r.one_node_marginals.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    const double minus = total[1 + v] / z;
    r.one_node_marginals[v] = {(z - total[1 + v]) / z, minus};
  }
  r.three_node_marginals.resize(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    for (int c = 0; c < 8; ++c) r.three_node_marginals[t][c] = total[1 + n + 8 * t + c] / z;
  }
  return r;
}

std::vector<double> boltzmann_distribution(const Instance& instance) {
  guard(instance);
  const std::uint64_t count = 1ULL << instance.n_vertices();
  const LogWeight lw(instance);
  const double shift = max_log_weight(lw, count);
  std::vector<double> p(count);
  double z = 0.0;
  for (std::uint64_t b = 0; b < count; ++b) {
    p[b] = std::exp(lw(b) - shift);
    z += p[b];
  }
  for (double& x : p) x /= z;
  return p;
}

double gibbs_free_energy(const Instance& instance, std::span<const double> joint) {
  guard(instance);
  const std::uint64_t count = 1ULL << instance.n_vertices();
  if (joint.size() != count) throw InvalidInput("joint distribution must have 2^n entries");
  double sum = 0.0;
  for (double p : joint) {
    if (!(p >= 0.0)) throw InvalidInput("joint distribution has a negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-10) throw InvalidInput("joint distribution is not normalized");

  const LogWeight lw(instance);
  double g = 0.0;
  for (std::uint64_t b = 0; b < count; ++b) {
    const double p = joint[b];
    if (p > 0.0) g += p * (lw(b) - std::log(p));
  }
  return g;
}

}  // namespace motifbp
