#include <cmath>

#include "doctest.h"
#include "motifbp/bp.hpp"
#include "motifbp/errors.hpp"
#include "motifbp/generators.hpp"
#include "test_support.hpp"

using namespace motifbp;
using motifbp::testing::make_instance;
using motifbp::testing::naive_exact;
using motifbp::testing::single_triangle;

namespace {

Instance star_at_zero(double h0, double coupling) {
  return make_instance({h0, 0, 0, 0, 0, 0, 0}, {{0, 1, 2, 1.0}, {0, 3, 4, coupling}, {0, 5, 6, coupling}});
}

Instance tree_instance(std::size_t n_tri, std::uint64_t seed) {
  GeneratorSpec s;
  s.kind = GeneratorKind::triangle_tree;
  s.n_triangles = n_tri;
  s.coupling = ValueLaw::uniform(0.0, 2.0);
  s.field = ValueLaw::uniform(0.0, 1.0);
  s.seed = seed;
  return generate(s);
}

Instance chain_instance(std::size_t n_tri, std::uint64_t seed, double j_max = 2.0) {
  GeneratorSpec s;
  s.kind = GeneratorKind::shared_edge_chain;
  s.n_triangles = n_tri;
  s.coupling = ValueLaw::uniform(0.0, j_max);
  s.field = ValueLaw::uniform(0.0, 1.0);
  s.seed = seed;
  return generate(s);
}

}  // namespace

TEST_CASE("init_messages") {
  const Instance inst = single_triangle(1.0);
  const Messages ones = init_messages(inst, 1.0);
  REQUIRE(ones.size() == 3);
  for (double v : ones.values()) CHECK(v == 1.0);
  const Messages zeros = init_messages(inst, 0.0);
  for (double v : zeros.values()) CHECK(v == 0.0);
  CHECK_THROWS_AS(init_messages(inst, 1.5), InvalidInput);
  CHECK_THROWS_AS(Messages::from_values({0.5, -1.2, 0.0}), InvalidInput);
  CHECK_THROWS_AS(Messages::from_values({0.5, NAN, 0.0}), InvalidInput);
}

TEST_CASE("update_message with empty cavity sum") {
  const Instance inst = make_instance({0.5, 0, 0}, {{0, 1, 2, 1.0}});
  const Messages ones = init_messages(inst, 1.0);
  CHECK(update_message(inst, ones, {0, 0}) == doctest::Approx(std::tanh(0.5)).epsilon(1e-15));
  CHECK(update_message(inst, ones, {0, 0}) == doctest::Approx(0.462117).epsilon(1e-6));
  CHECK(update_message(inst, ones, {0, 1}) == 0.0);
}

TEST_CASE("update_message with one other triangle") {
  const Instance inst = make_instance({0, 0, 0, 0, 0}, {{0, 1, 2, 1.0}, {0, 3, 4, 1.0}});
  const Messages ones = init_messages(inst, 1.0);
  CHECK(update_message(inst, ones, {0, 0}) == doctest::Approx(std::tanh(1.0)).epsilon(1e-14));
}

TEST_CASE("update_message against a high-precision evaluation") {
  // 50-digit evaluation of tanh(0.3 + 2 atanh(tanh(0.5) * 0.64)).
  const Instance inst = star_at_zero(0.3, 0.5);
  const Messages m(inst.n_triangles(), 0.8);
  const double v = update_message(inst, m, {0, 0});
  CHECK(std::abs(v - 0.72099902010883490) <= 1e-15);
  // the input vector is untouched
  for (double x : m.values()) CHECK(x == 0.8);
}

TEST_CASE("sweep examples") {
  const Instance inst = make_instance({0.5, 0.5, 0.5}, {{0, 1, 2, 1.0}});
  const Messages out = sweep(inst, init_messages(inst, 1.0), BPConfig{});
  for (double v : out.values()) CHECK(v == doctest::Approx(std::tanh(0.5)).epsilon(1e-15));
  // at a fixed point nothing moves
  CHECK(max_abs_diff(sweep(inst, out, BPConfig{}), out) == 0.0);
}

TEST_CASE("sweep on a two-triangle shared-edge chain matches direct evaluation") {
  const double h = 0.2, J = 1.0, th = std::tanh(J);
  const Instance inst = make_instance({h, h, h, h}, {{0, 1, 2, J}, {1, 2, 3, J}});
  Messages prev = init_messages(inst, 1.0);
  // positions: T0 = (0,1,2), T1 = (1,2,3)
  double a = 1, b = 1;  // shared vertices' messages (symmetric), c = outer vertices
  double c = 1;
  for (int step = 0; step < 6; ++step) {
    const Messages next = sweep(inst, prev, BPConfig{});
    const double c_new = std::tanh(h);
    const double b_new = std::tanh(h + std::atanh(th * a * c));
    a = b = b_new;
    c = c_new;
    CHECK(next[0] == doctest::Approx(c).epsilon(1e-14));
    CHECK(next[1] == doctest::Approx(b).epsilon(1e-14));
    CHECK(next[2] == doctest::Approx(b).epsilon(1e-14));
    CHECK(next[3] == doctest::Approx(a).epsilon(1e-14));
    CHECK(next[4] == doctest::Approx(a).epsilon(1e-14));
    CHECK(next[5] == doctest::Approx(c).epsilon(1e-14));
    for (std::size_t i = 0; i < next.size(); ++i) CHECK(next[i] <= prev[i] + kMonotoneSlack);
    prev = next;
  }
}

TEST_CASE("run_bp examples") {
  const Instance inst = single_triangle(1.0, 0.0);
  const BPRunResult r = run_bp(inst, BPConfig{});
  CHECK(r.converged);
  CHECK(r.iterations <= 2);
  for (double v : r.final_messages.values()) CHECK(v == 0.0);

  BPConfig none;
  none.max_iters = 0;
  const BPRunResult z = run_bp(inst, none);
  CHECK_FALSE(z.converged);
  CHECK(z.iterations == 0);
  CHECK(z.residual_trace.empty());

  BPConfig bad;
  bad.damping = 1.0;
  CHECK_THROWS_AS(run_bp(inst, bad), InvalidInput);
  bad = BPConfig{};
  bad.tolerance = -1;
  CHECK_THROWS_AS(run_bp(inst, bad), InvalidInput);
}

TEST_CASE("run_bp records the message trace") {
  const Instance inst = chain_instance(3, 5);
  BPConfig cfg;
  cfg.record_trace = true;
  const BPRunResult r = run_bp(inst, cfg);
  REQUIRE(r.message_trace.has_value());
  CHECK(r.message_trace->size() == r.iterations + 1);
  CHECK(r.residual_trace.size() == r.iterations);
  CHECK(r.dual_nu_trace.size() == r.iterations);
  CHECK(r.message_trace->front() == init_messages(inst, 1.0));
  CHECK(r.message_trace->back() == r.final_messages);
}

TEST_CASE("node_marginal examples") {
  const Instance iso = make_instance({0.7}, {});
  const NodeDistribution p = node_marginal(iso, Messages(0, 0.0), 0);
  CHECK(p[0] == doctest::Approx(0.80218388855858).epsilon(1e-13));
  CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-15));

  const Instance tri = single_triangle(1.0, 0.0);
  const NodeDistribution u = node_marginal(tri, Messages(1, 0.0), 1);
  CHECK(u[0] == 0.5);
  CHECK(u[1] == 0.5);

  const Instance tri2 = single_triangle(1.0, 0.2);
  const BPRunResult r = run_bp(tri2, BPConfig{});
  const auto oracle = naive_exact(tri2);
  for (VertexId v = 0; v < 3; ++v) {
    CHECK(std::abs(node_marginal(tri2, r.final_messages, v)[0] - oracle.node[v][0]) <= 1e-8);
  }
}

TEST_CASE("triangle_belief examples") {
  const Instance free = single_triangle(0.0);
  for (double p : triangle_belief(free, Messages(1, 0.0), 0)) CHECK(p == doctest::Approx(0.125).epsilon(1e-15));

  const Instance tri = single_triangle(1.0);
  const TriangleDistribution b = triangle_belief(tri, Messages(1, 0.0), 0);
  const double e = std::exp(1.0);
  CHECK(b[0] == doctest::Approx(e / (4 * e + 4 / e)).epsilon(1e-14));
  CHECK(b[0] == doctest::Approx(0.22019926949447).epsilon(1e-12));
  double total = 0;
  for (double p : b) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("trees: beliefs are locally consistent and exact at the fixed point") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = tree_instance(1 + seed % 5, seed);
    const BPRunResult r = run_bp(inst, BPConfig{});
    REQUIRE(r.converged);
    CHECK(r.monotone_decreasing);
    const auto oracle = naive_exact(inst);
    const Beliefs b = beliefs_from_messages(inst, r.final_messages);
    for (TriangleIndex t = 0; t < inst.n_triangles(); ++t) {
      for (std::size_t pos = 0; pos < 3; ++pos) {
        double plus = 0;
        for (int idx = 0; idx < 8; ++idx)
          if (((idx >> (2 - pos)) & 1) == 0) plus += b.three_node[t][idx];
        const VertexId v = inst.triangle(t).vertices[pos];
        CHECK(std::abs(plus - b.one_node[v][0]) <= 1e-8);
        CHECK(std::abs(plus - oracle.node[v][0]) <= 1e-8);
      }
      for (int idx = 0; idx < 8; ++idx) CHECK(std::abs(b.three_node[t][idx] - oracle.tri[t][idx]) <= 1e-8);
    }
  }
}

TEST_CASE("loopy fixed points are locally consistent") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = chain_instance(2 + seed % 4, 100 + seed);
    const BPRunResult r = run_bp(inst, BPConfig{});
    REQUIRE(r.converged);
    const Beliefs b = beliefs_from_messages(inst, r.final_messages);
    for (TriangleIndex t = 0; t < inst.n_triangles(); ++t) {
      for (std::size_t pos = 0; pos < 3; ++pos) {
        double plus = 0;
        for (int idx = 0; idx < 8; ++idx)
          if (((idx >> (2 - pos)) & 1) == 0) plus += b.three_node[t][idx];
        CHECK(std::abs(plus - b.one_node[inst.triangle(t).vertices[pos]][0]) <= 1e-8);
      }
    }
  }
}

TEST_CASE("bp_map properties") {
  Rng rng(3);
  for (int rep = 0; rep < 40; ++rep) {
    const Instance inst = chain_instance(2 + rep % 5, 200 + rep);
    std::vector<double> x(inst.n_messages()), y(inst.n_messages());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = rng.uniform(-1, 1);
      y[i] = rng.uniform(0, 1);
    }
    const Messages phi = bp_map(inst, Messages::from_values(x));
    for (double v : phi.values()) {
      CHECK(v > -1.0);
      CHECK(v < 1.0);
    }
    // ferromagnetic map is monotone on [0,1]^n
    std::vector<double> hi = y;
    for (double& v : hi) v = std::min(1.0, v + rng.uniform(0, 0.3));
    const Messages lo_p = bp_map(inst, Messages::from_values(y));
    const Messages hi_p = bp_map(inst, Messages::from_values(hi));
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(hi_p[i] >= lo_p[i] - 1e-15);
  }
}

TEST_CASE("sequential and damped schedules reach the same tree fixed point") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Instance inst = tree_instance(4, 300 + seed);
    const BPRunResult sync = run_bp(inst, BPConfig{});
    BPConfig seq;
    seq.schedule = Schedule::sequential;
    const BPRunResult s = run_bp(inst, seq);
    BPConfig damp;
    damp.damping = 0.5;
    const BPRunResult d = run_bp(inst, damp);
    REQUIRE(sync.converged);
    REQUIRE(s.converged);
    REQUIRE(d.converged);
    CHECK(s.iterations <= sync.iterations);
    CHECK(max_abs_diff(sync.final_messages, s.final_messages) <= 1e-9);
    CHECK(max_abs_diff(sync.final_messages, d.final_messages) <= 1e-9);
  }
}

TEST_CASE("damped sweep is the convex combination") {
  const Instance inst = chain_instance(3, 9);
  const Messages start = init_messages(inst, 1.0);
  BPConfig cfg;
  cfg.damping = 0.25;
  const Messages damped = sweep(inst, start, cfg);
  const Messages plain = bp_map(inst, start);
  for (std::size_t i = 0; i < start.size(); ++i)
    CHECK(damped[i] == doctest::Approx(0.25 * start[i] + 0.75 * plain[i]).epsilon(1e-15));
}
