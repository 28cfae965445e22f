#include "motifbp/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "motifbp/errors.hpp"
#include "motifbp/rng.hpp"

namespace motifbp {

std::uint64_t Rng::index(std::uint64_t n) {
  const std::uint64_t bucket = std::numeric_limits<std::uint64_t>::max() / n;
  const std::uint64_t limit = bucket * n;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r < limit) return r / bucket;
  }
}

namespace {

using Triple = std::array<VertexId, 3>;

double draw(Rng& rng, const ValueLaw& law) { return law.is_constant() ? law.min : rng.uniform(law.min, law.max); }

// Canonical order first, then couplings (triangle order) and fields (vertex order).
Instance finish(std::vector<Triple> triples, std::size_t n_vertices, const GeneratorSpec& spec, Rng& rng) {
  for (Triple& t : triples) std::sort(t.begin(), t.end());
  std::sort(triples.begin(), triples.end());

  InstanceDescription d;
  d.beta = spec.beta;
  for (const Triple& t : triples) {
    d.triangles.push_back({{static_cast<long long>(t[0]), static_cast<long long>(t[1]), static_cast<long long>(t[2])},
                           draw(rng, spec.coupling)});
  }
  d.fields.resize(n_vertices);
  for (double& h : d.fields) h = draw(rng, spec.field);
  return build_instance(d);
}

std::uint64_t choose3(std::uint64_t n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; }

}  // namespace

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::triangle_tree: return "triangle_tree";
    case GeneratorKind::random_motif: return "random_motif";
    case GeneratorKind::shared_edge_chain: return "shared_edge_chain";
  }
  return "unknown";
}

GeneratorKind generator_kind_from_string(const std::string& name) {
  std::string key = name;
  std::replace(key.begin(), key.end(), '-', '_');
  if (key == "triangle_tree") return GeneratorKind::triangle_tree;
  if (key == "random_motif") return GeneratorKind::random_motif;
  if (key == "shared_edge_chain") return GeneratorKind::shared_edge_chain;
  throw InvalidInput("unknown generator kind: " + name);
}

void GeneratorSpec::validate() const {
  if (n_triangles == 0) throw InvalidInput("n_triangles must be positive");
  for (const ValueLaw* law : {&coupling, &field}) {
    if (!std::isfinite(law->min) || !std::isfinite(law->max) || law->min > law->max) {
      throw InvalidInput("value law needs finite min <= max");
    }
    if (ferromagnetic && law->min < 0.0) throw InvalidInput("ferromagnetic spec needs non-negative couplings and fields");
  }
  if (!std::isfinite(beta) || beta <= 0.0) throw InvalidInput("beta must be positive");
  if (kind == GeneratorKind::random_motif) {
    if (n_vertices < 3) throw InvalidInput("random_motif needs at least 3 vertices");
    if (n_triangles > choose3(n_vertices)) throw InvalidInput("requested triangles exceed available distinct triples");
  }
}

Instance gen_triangle_tree(const GeneratorSpec& spec) {
  if (spec.kind != GeneratorKind::triangle_tree) throw InvalidInput("spec kind is not triangle_tree");
  spec.validate();
  Rng rng(spec.seed);
  std::vector<Triple> triples{{0, 1, 2}};
  std::size_t n = 3;
  for (std::size_t t = 1; t < spec.n_triangles; ++t) {
    const auto anchor = static_cast<VertexId>(rng.index(n));
    triples.push_back({anchor, n, n + 1});
    n += 2;
  }
  return finish(std::move(triples), n, spec, rng);
}

Instance gen_random_motif(const GeneratorSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<Triple> triples;

  if (spec.kind == GeneratorKind::shared_edge_chain) {
    for (std::size_t t = 0; t < spec.n_triangles; ++t) triples.push_back({t, t + 1, t + 2});
    return finish(std::move(triples), spec.n_triangles + 2, spec, rng);
  }
  if (spec.kind != GeneratorKind::random_motif) throw InvalidInput("spec kind is not random_motif or shared_edge_chain");

  const std::size_t n = spec.n_vertices;
  const std::uint64_t available = choose3(n);
  if (available <= (1u << 20)) {
    // partial Fisher-Yates over the lexicographic list of all triples
    std::vector<Triple> all;
    all.reserve(available);
    for (VertexId a = 0; a < n; ++a)
      for (VertexId b = a + 1; b < n; ++b)
        for (VertexId c = b + 1; c < n; ++c) all.push_back({a, b, c});
    for (std::size_t k = 0; k < spec.n_triangles; ++k) {
      const auto j = k + static_cast<std::size_t>(rng.index(all.size() - k));
      std::swap(all[k], all[j]);
      triples.push_back(all[k]);
    }
  } else {
    std::set<Triple> seen;
    while (triples.size() < spec.n_triangles) {
      Triple t{static_cast<VertexId>(rng.index(n)), static_cast<VertexId>(rng.index(n)),
               static_cast<VertexId>(rng.index(n))};
      std::sort(t.begin(), t.end());
      if (t[0] == t[1] || t[1] == t[2]) continue;
      if (seen.insert(t).second) triples.push_back(t);
    }
  }
  return finish(std::move(triples), n, spec, rng);
}

Instance generate(const GeneratorSpec& spec) {
  return spec.kind == GeneratorKind::triangle_tree ? gen_triangle_tree(spec) : gen_random_motif(spec);
}

}  // namespace motifbp
