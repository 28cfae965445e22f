#include "motifbp/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "motifbp/errors.hpp"

namespace motifbp {

namespace {

constexpr std::size_t kPartner[3][2] = {{1, 2}, {0, 2}, {0, 1}};

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

double log_add_exp(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

template <std::size_t N>
double log_sum_exp(const double (&v)[N]) {
  const double m = *std::max_element(v, v + N);
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

void check_beliefs(const Instance& instance, const Beliefs& beliefs) {
  if (beliefs.one_node.size() != instance.n_vertices() || beliefs.three_node.size() != instance.n_triangles()) {
    throw InvalidInput("belief shape does not match instance");
  }
}

void check_messages(const Instance& instance, const Messages& messages) {
  if (messages.size() != instance.n_messages()) throw InvalidInput("message shape does not match instance");
}

}  // namespace

double DualGradient::inf_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double average_energy(const Instance& instance, const Beliefs& beliefs) {
  check_beliefs(instance, beliefs);
  double u = 0.0;
  for (TriangleIndex t = 0; t < instance.n_triangles(); ++t) {
    double moment = 0.0;
    for (int c = 0; c < 8; ++c) {
      const int prod = spin_of_bit((c >> 2) & 1) * spin_of_bit((c >> 1) & 1) * spin_of_bit(c & 1);
      moment += beliefs.three_node[t][c] * prod;
    }
    u -= instance.triangle(t).coupling * moment;
  }
  for (VertexId v = 0; v < instance.n_vertices(); ++v) {
    u -= instance.field(v) * (beliefs.one_node[v][0] - beliefs.one_node[v][1]);
  }
  return u;
}

double bethe_entropy(const Instance& instance, const Beliefs& beliefs) {
  check_beliefs(instance, beliefs);
  double s = 0.0;
  for (const auto& p : beliefs.three_node) {
    for (double x : p) s -= xlogx(x);
  }
  for (VertexId v = 0; v < instance.n_vertices(); ++v) {
    const double q = static_cast<double>(instance.incidence(v).size());
    s += (q - 1.0) * (xlogx(beliefs.one_node[v][0]) + xlogx(beliefs.one_node[v][1]));
  }
  return s;
}

double primal_bethe(const Instance& instance, const Beliefs& beliefs) {
  return -instance.beta() * average_energy(instance, beliefs) + bethe_entropy(instance, beliefs);
}

double dual_free_energy_lambda(const Instance& instance, const Messages& messages) {
  check_messages(instance, messages);
  const double beta = instance.beta();
  std::vector<double> lam(messages.size());
  for (std::size_t e = 0; e < lam.size(); ++e) lam[e] = clamped_atanh(messages[e]);

  double total = 0.0;
  for (VertexId v = 0; v < instance.n_vertices(); ++v) {
    double branch[2];
    for (int b = 0; b < 2; ++b) {
      const int xi = spin_of_bit(b);
      double acc = beta * instance.field(v) * xi;
      for (const Incidence& inc : instance.incidence(v)) {
        const double coupling = beta * instance.triangle(inc.triangle).coupling;
        const double lm = lam[3 * inc.triangle + kPartner[inc.position][0]];
        const double ln = lam[3 * inc.triangle + kPartner[inc.position][1]];
        double terms[4];
        for (int c = 0; c < 4; ++c) {
          const int xm = spin_of_bit((c >> 1) & 1), xn = spin_of_bit(c & 1);
          terms[c] = coupling * xi * xm * xn + lm * xm + ln * xn;
        }
        acc += log_sum_exp(terms);
      }
      branch[b] = acc;
    }
    total += log_add_exp(branch[0], branch[1]);
  }

  for (TriangleIndex t = 0; t < instance.n_triangles(); ++t) {
    const double coupling = beta * instance.triangle(t).coupling;
    double terms[8];
    for (int c = 0; c < 8; ++c) {
      const int si = spin_of_bit((c >> 2) & 1), sj = spin_of_bit((c >> 1) & 1), sk = spin_of_bit(c & 1);
      terms[c] = coupling * si * sj * sk + lam[3 * t] * si + lam[3 * t + 1] * sj + lam[3 * t + 2] * sk;
    }
    total -= 2.0 * log_sum_exp(terms);
  }
  return total;
}

double dual_free_energy_nu(const Instance& instance, const Messages& messages) {
  check_messages(instance, messages);
  const double beta = instance.beta();
  double total = 0.0;
  for (VertexId v = 0; v < instance.n_vertices(); ++v) {
    double plus = beta * instance.field(v);
    double minus = -plus;
    for (const Incidence& inc : instance.incidence(v)) {
      const double a = instance.triangle(inc.triangle).theta * messages[3 * inc.triangle + kPartner[inc.position][0]] *
                       messages[3 * inc.triangle + kPartner[inc.position][1]];
      plus += std::log1p(a);
      minus += std::log1p(-a);
    }
    total += log_add_exp(plus, minus);
  }
  for (TriangleIndex t = 0; t < instance.n_triangles(); ++t) {
    const double a = instance.triangle(t).theta * messages[3 * t] * messages[3 * t + 1] * messages[3 * t + 2];
    if (!(1.0 + a > 0.0)) throw DomainError("1 + theta*nu*nu*nu <= 0 at triangle " + std::to_string(t));
    total -= 2.0 * std::log1p(a);
  }
  return total;
}

DualGradient dual_gradient(const Instance& instance, const Messages& messages) {
  check_messages(instance, messages);
  const Messages updated = bp_map(instance, messages);
  DualGradient grad;
  grad.values.assign(messages.size(), 0.0);

  for (TriangleIndex t = 0; t < instance.n_triangles(); ++t) {
    const double theta = instance.triangle(t).theta;
    for (std::size_t p = 0; p < 3; ++p) {
      const double self = messages.at({t, p});
      auto term = [&](double a, double b) {
        const double num = theta * a * b;
        const double den = 1.0 + num * self;
        if (!(den > 0.0) || !std::isfinite(den)) {
          throw DomainError("degenerate gradient denominator at pair (triangle " + std::to_string(t) + ", position " +
                            std::to_string(p) + ")");
        }
        return num / den;
      };
      double g = 0.0;
      for (int side = 0; side < 2; ++side) {
        const std::size_t owner = kPartner[p][side];      // vertex whose F_i is differentiated
        const std::size_t other = kPartner[p][1 - side];  // remaining partner
        const double a = messages.at({t, other});
        g += term(a, updated.at({t, owner})) - term(a, messages.at({t, owner}));
      }
      grad.values[3 * t + p] = g;
    }
  }
  return grad;
}

EnergyReport energy_report(const Instance& instance, const Messages& messages) {
  EnergyReport r;
  r.dual_nu = dual_free_energy_nu(instance, messages);
  r.dual_lambda = dual_free_energy_lambda(instance, messages);
  r.primal = primal_bethe(instance, beliefs_from_messages(instance, messages));
  r.grad_inf_norm = dual_gradient(instance, messages).inf_norm();
  return r;
}

}  // namespace motifbp
