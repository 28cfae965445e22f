#include <cmath>

#include "doctest.h"
#include "motifbp/errors.hpp"
#include "motifbp/instance.hpp"
#include "test_support.hpp"

using namespace motifbp;
using motifbp::testing::make_instance;

TEST_CASE("build_instance caches theta and incidence") {
  const Instance inst = make_instance({0, 0, 0}, {{0, 1, 2, 1.0}});
  CHECK(inst.n_vertices() == 3);
  CHECK(inst.n_triangles() == 1);
  CHECK(inst.beta() == 1.0);
  CHECK(inst.triangle(0).theta == std::tanh(1.0));
  CHECK(inst.triangle(0).theta == doctest::Approx(0.761594).epsilon(1e-6));
  for (VertexId v = 0; v < 3; ++v) {
    REQUIRE(inst.incidence(v).size() == 1);
    CHECK(inst.incidence(v)[0].triangle == 0);
    CHECK(inst.incidence(v)[0].position == v);
  }
}

TEST_CASE("theta follows beta") {
  const Instance inst = make_instance({0, 0, 0}, {{0, 1, 2, 0.8}}, 0.5);
  CHECK(inst.triangle(0).theta == std::tanh(0.4));
}

TEST_CASE("isolated vertex instance is valid") {
  const Instance inst = make_instance({0.7}, {});
  CHECK(inst.n_vertices() == 1);
  CHECK(inst.incidence(0).empty());
  CHECK(hyper_degree(inst, 0) == 0);
}

TEST_CASE("triangles are canonicalised") {
  const Instance inst = make_instance({0, 0, 0, 0, 0}, {{4, 2, 3, 0.5}, {2, 0, 1, 0.25}});
  CHECK(inst.triangle(0).vertices == std::array<VertexId, 3>{0, 1, 2});
  CHECK(inst.triangle(0).coupling == 0.25);
  CHECK(inst.triangle(1).vertices == std::array<VertexId, 3>{2, 3, 4});
  CHECK(hyper_degree(inst, 2) == 2);
}

TEST_CASE("build_instance rejects malformed input") {
  CHECK_THROWS_WITH_AS(make_instance({0, 0}, {{0, 0, 1, 1.0}}), doctest::Contains("repeated vertex"), InvalidInput);
  CHECK_THROWS_WITH_AS(make_instance({0, 0, 0}, {{0, 1, 3, 1.0}}), doctest::Contains("out of range"), InvalidInput);
  CHECK_THROWS_WITH_AS(make_instance({0, 0, 0}, {{0, -1, 2, 1.0}}), doctest::Contains("out of range"), InvalidInput);
  CHECK_THROWS_WITH_AS(make_instance({0, 0, 0}, {{0, 1, 2, 1.0}, {2, 1, 0, 0.5}}), doctest::Contains("duplicate"),
                       InvalidInput);
  CHECK_THROWS_AS(make_instance({0, 0, 0}, {{0, 1, 2, 1.0}}, 0.0), InvalidInput);
  CHECK_THROWS_AS(make_instance({0, 0, 0}, {{0, 1, 2, 1.0}}, -1.0), InvalidInput);
  CHECK_THROWS_AS(make_instance({0, 0, 0}, {{0, 1, 2, INFINITY}}), InvalidInput);
  CHECK_THROWS_AS(make_instance({0, 0, 0}, {{0, 1, 2, 50.0}}), InvalidInput);
  CHECK_THROWS_AS(make_instance({NAN, 0, 0}, {}), InvalidInput);
}

TEST_CASE("hyper_degree counts incident triangles") {
  const Instance inst = make_instance({0, 0, 0, 0, 0, 0, 0, 0}, {{0, 1, 2, 1}, {0, 3, 4, 1}, {0, 5, 6, 1}});
  CHECK(hyper_degree(inst, 0) == 3);
  CHECK(hyper_degree(inst, 1) == 1);
  CHECK(hyper_degree(inst, 7) == 0);
  CHECK_THROWS_AS(hyper_degree(inst, 8), InvalidInput);
}

TEST_CASE("is_ferromagnetic") {
  CHECK(is_ferromagnetic(make_instance({0, 0, 0}, {{0, 1, 2, 1.0}})));
  CHECK_FALSE(is_ferromagnetic(make_instance({-0.1, 0, 0}, {{0, 1, 2, 1.0}})));
  CHECK_FALSE(is_ferromagnetic(make_instance({0, 0, 0}, {{0, 1, 2, -1.0}})));
  CHECK(is_ferromagnetic(make_instance({0, 0, 0}, {{0, 1, 2, 0.0}})));
}

TEST_CASE("energy by direct substitution") {
  const Instance tri = make_instance({0, 0, 0}, {{0, 1, 2, 1.0}});
  CHECK(energy(tri, Configuration({1, 1, 1})) == -1.0);
  CHECK(energy(tri, Configuration({1, 1, -1})) == 1.0);
  const Instance field = make_instance({0.5, 0, 0}, {{0, 1, 2, 0.0}});
  CHECK(energy(field, Configuration({1, 1, -1})) == -0.5);
  CHECK_THROWS_AS(energy(tri, Configuration({1, 1})), InvalidInput);
  CHECK_THROWS_AS(Configuration({1, 0, 1}), InvalidInput);
}

TEST_CASE("energy properties on random instances") {
  Rng rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 4 + rng.index(6);
    InstanceDescription d;
    for (std::size_t v = 0; v < n; ++v) d.fields.push_back(rng.uniform(-1, 1));
    for (long long a = 0; a + 2 < static_cast<long long>(n); a += 2) d.triangles.push_back({{a, a + 1, a + 2}, rng.uniform(-2, 2)});
    const Instance inst = build_instance(d);

    // vertex order inside a triple does not matter
    InstanceDescription shuffled = d;
    for (auto& t : shuffled.triangles) std::swap(t.vertices[0], t.vertices[2]);
    const Instance inst2 = build_instance(shuffled);

    const unsigned long long bits = rng.next() & ((1ULL << n) - 1);
    const Configuration c = Configuration::from_bits(n, bits);
    CHECK(energy(inst, c) == energy(inst2, c));

    std::size_t degree_sum = 0;
    for (VertexId v = 0; v < n; ++v) degree_sum += hyper_degree(inst, v);
    CHECK(degree_sum == 3 * inst.n_triangles());

    // with h = 0 a global flip negates every three-spin product
    InstanceDescription no_field = d;
    std::fill(no_field.fields.begin(), no_field.fields.end(), 0.0);
    const Instance zero_h = build_instance(no_field);
    CHECK(energy(zero_h, c.flipped()) == doctest::Approx(-energy(zero_h, c)).epsilon(1e-15));
  }
}
