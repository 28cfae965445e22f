#pragma once

#include <vector>

#include "motifbp/beliefs.hpp"
#include "motifbp/bp.hpp"
#include "motifbp/instance.hpp"

namespace motifbp {

// d G*(nu) / d nu, aligned with Messages indexing.
struct DualGradient {
  std::vector<double> values;

  double inf_norm() const;
};

// U(P) = -sum_T sum_x P_T(x) J_T x_i x_j x_k - sum_i sum_x P_i(x) h_i x.
double average_energy(const Instance& instance, const Beliefs& beliefs);

// S = -sum_T sum P_T log P_T + sum_i (q_i - 1) sum P_i log P_i, with 0 log 0 = 0.
double bethe_entropy(const Instance& instance, const Beliefs& beliefs);

// -beta * U(P) + S_Bethe(P).
double primal_bethe(const Instance& instance, const Beliefs& beliefs);

// Dual in terms of effective fields lambda' = atanh(nu) (clamped):
// sum_i F_i(lambda) - 2 * sum_T F_T(lambda). Each triangle touches three
// vertex terms, so it is subtracted twice; this weight makes the dual equal
// the primal Bethe free energy at BP fixed points, and log Z on trees.
double dual_free_energy_lambda(const Instance& instance, const Messages& messages);

// Same functional written in messages:
// sum_i log[e^{bh_i} prod(1 + theta nu nu) + e^{-bh_i} prod(1 - theta nu nu)]
//   - 2 * sum_T log(1 + theta_T nu nu nu).
// Differs from the lambda form by the constant sum_T log cosh(beta J_T).
double dual_free_energy_nu(const Instance& instance, const Messages& messages);

// Closed-form gradient of dual_free_energy_nu. For nu_{j -> {i,k}}:
//   [t(nu_k, phi_i) - t(nu_k, nu_i)] + [t(nu_i, phi_k) - t(nu_i, nu_k)],
//   t(a, b) = theta a b / (1 + theta a b nu_j) = 1 / (nu_j + 1 / (theta a b)).
// Vanishes exactly when phi(nu) = nu on the triangle.
DualGradient dual_gradient(const Instance& instance, const Messages& messages);

struct EnergyReport {
  double dual_nu = 0.0;
  double dual_lambda = 0.0;
  double primal = 0.0;
  double grad_inf_norm = 0.0;
};

EnergyReport energy_report(const Instance& instance, const Messages& messages);

}  // namespace motifbp
