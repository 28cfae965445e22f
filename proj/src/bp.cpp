#include "motifbp/bp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "motifbp/bethe.hpp"
#include "motifbp/errors.hpp"

namespace motifbp {

namespace {

constexpr std::size_t kPartner[3][2] = {{1, 2}, {0, 2}, {0, 1}};

// atanh(theta_T * nu_{m->T} * nu_{n->T}) for the two partners of `slot` in triangle t.
double incoming(const Instance& instance, const Messages& messages, TriangleIndex t, std::size_t slot) {
  const double a = messages[3 * t + kPartner[slot][0]];
  const double b = messages[3 * t + kPartner[slot][1]];
  return std::atanh(instance.triangle(t).theta * a * b);
}

}  // namespace

Messages::Messages(std::size_t n_triangles, double value) : values_(3 * n_triangles, value) {}

Messages Messages::from_values(std::vector<double> values) {
  if (values.size() % 3 != 0) throw InvalidInput("message vector length must be a multiple of 3");
  for (double v : values) {
    if (!std::isfinite(v) || v < -1.0 || v > 1.0) throw InvalidInput("message value outside [-1, 1]");
  }
  Messages m;
  m.values_ = std::move(values);
  return m;
}

double Messages::min() const {
  return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

double Messages::max() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

double max_abs_diff(const Messages& a, const Messages& b) {
  if (a.size() != b.size()) throw InvalidInput("message vectors differ in shape");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.values_[i] - b.values_[i]));
  return d;
}

void BPConfig::validate() const {
  if (!(tolerance > 0.0)) throw InvalidInput("tolerance must be positive");
  if (!(damping >= 0.0 && damping < 1.0)) throw InvalidInput("damping must lie in [0, 1)");
  if (!(init_value > -1.0 && init_value <= 1.0)) throw InvalidInput("init value must lie in (-1, 1]");
}

Messages init_messages(const Instance& instance, double value) {
  if (!(value > -1.0 && value <= 1.0)) throw InvalidInput("init value must lie in (-1, 1]");
  return Messages(instance.n_triangles(), value);
}

double update_message(const Instance& instance, const Messages& messages, DirectedPair target) {
  const VertexId i = instance.triangle(target.triangle).vertices[target.position];
  double field = instance.beta() * instance.field(i);
  for (const Incidence& inc : instance.incidence(i)) {
    if (inc.triangle == target.triangle) continue;
    field += incoming(instance, messages, inc.triangle, inc.position);
  }
  return std::tanh(field);
}

Messages bp_map(const Instance& instance, const Messages& messages) {
  if (messages.size() != instance.n_messages()) throw InvalidInput("message shape does not match instance");
  Messages out(instance.n_triangles(), 0.0);
  for (TriangleIndex t = 0; t < instance.n_triangles(); ++t) {
    for (std::size_t p = 0; p < 3; ++p) out.at({t, p}) = update_message(instance, messages, {t, p});
  }
  return out;
}

Messages sweep(const Instance& instance, const Messages& messages, const BPConfig& config) {
  const double d = config.damping;
  if (config.schedule == Schedule::synchronous) {
    Messages next = bp_map(instance, messages);
    if (d > 0.0) {
      for (std::size_t e = 0; e < next.size(); ++e) next[e] = d * messages[e] + (1.0 - d) * next[e];
    }
    return next;
  }
  if (messages.size() != instance.n_messages()) throw InvalidInput("message shape does not match instance");
  Messages next = messages;
  for (TriangleIndex t = 0; t < instance.n_triangles(); ++t) {
    for (std::size_t p = 0; p < 3; ++p) {
      const double fresh = update_message(instance, next, {t, p});
      next.at({t, p}) = d * next.at({t, p}) + (1.0 - d) * fresh;
    }
  }
  return next;
}

BPRunResult run_bp(const Instance& instance, const BPConfig& config) {
  config.validate();
  return run_bp(instance, config, init_messages(instance, config.init_value));
}

BPRunResult run_bp(const Instance& instance, const BPConfig& config, Messages start) {
  config.validate();
  if (start.size() != instance.n_messages()) throw InvalidInput("message shape does not match instance");

  BPRunResult result;
  if (config.record_trace) result.message_trace.emplace().push_back(start);

  Messages current = std::move(start);
  for (std::size_t it = 0; it < config.max_iters; ++it) {
    Messages next = sweep(instance, current, config);
    for (std::size_t e = 0; e < next.size(); ++e) {
      if (next[e] > current[e] + kMonotoneSlack) {
        result.monotone_decreasing = false;
        break;
      }
    }
    const double residual = max_abs_diff(next, current);
    current = std::move(next);

    ++result.iterations;
    result.residual_trace.push_back(residual);
    result.dual_nu_trace.push_back(dual_free_energy_nu(instance, current));
    result.min_message_trace.push_back(current.min());
    result.max_message_trace.push_back(current.max());
    if (result.message_trace) result.message_trace->push_back(current);

    if (residual <= config.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.final_messages = std::move(current);
  return result;
}

double clamped_atanh(double nu) {
  return std::atanh(std::clamp(nu, -1.0 + kMessageClamp, 1.0 - kMessageClamp));
}

double local_field(const Instance& instance, const Messages& messages, VertexId vertex) {
  if (vertex >= instance.n_vertices()) throw InvalidInput("vertex out of range");
  if (messages.size() != instance.n_messages()) throw InvalidInput("message shape does not match instance");
  double field = instance.beta() * instance.field(vertex);
  for (const Incidence& inc : instance.incidence(vertex)) field += incoming(instance, messages, inc.triangle, inc.position);
  return field;
}

NodeDistribution node_marginal(const Instance& instance, const Messages& messages, VertexId vertex) {
  const double m = local_field(instance, messages, vertex);
  // logistic form keeps both tails accurate
  return {1.0 / (1.0 + std::exp(-2.0 * m)), 1.0 / (1.0 + std::exp(2.0 * m))};
}

TriangleDistribution triangle_belief(const Instance& instance, const Messages& messages, TriangleIndex triangle) {
  if (triangle >= instance.n_triangles()) throw InvalidInput("triangle index out of range");
  if (messages.size() != instance.n_messages()) throw InvalidInput("message shape does not match instance");
  const double coupling = instance.beta() * instance.triangle(triangle).coupling;
  double lam[3];
  for (std::size_t p = 0; p < 3; ++p) lam[p] = clamped_atanh(messages.at({triangle, p}));

  TriangleDistribution logw{};
  for (int c = 0; c < 8; ++c) {
    const int si = spin_of_bit((c >> 2) & 1), sj = spin_of_bit((c >> 1) & 1), sk = spin_of_bit(c & 1);
    logw[c] = coupling * si * sj * sk + lam[0] * si + lam[1] * sj + lam[2] * sk;
  }
  const double shift = *std::max_element(logw.begin(), logw.end());
  double z = 0.0;
  for (double& w : logw) {
    w = std::exp(w - shift);
    z += w;
  }
  for (double& w : logw) w /= z;
  return logw;
}

Beliefs beliefs_from_messages(const Instance& instance, const Messages& messages) {
  Beliefs b;
  b.one_node.reserve(instance.n_vertices());
  for (VertexId v = 0; v < instance.n_vertices(); ++v) b.one_node.push_back(node_marginal(instance, messages, v));
  b.three_node.reserve(instance.n_triangles());
  for (TriangleIndex t = 0; t < instance.n_triangles(); ++t) b.three_node.push_back(triangle_belief(instance, messages, t));
  return b;
}

}  // namespace motifbp
