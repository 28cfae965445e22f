#include "motifbp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "motifbp/errors.hpp"

namespace motifbp {

Configuration::Configuration(std::vector<int> spins) : spins_(std::move(spins)) {
  for (int s : spins_) {
    if (s != 1 && s != -1) throw InvalidInput("spin values must be +1 or -1");
  }
}

Configuration Configuration::all_plus(std::size_t n) {
  return Configuration(std::vector<int>(n, 1));
}

Configuration Configuration::from_bits(std::size_t n, unsigned long long bits) {
  std::vector<int> spins(n);
  for (std::size_t v = 0; v < n; ++v) spins[v] = ((bits >> v) & 1ULL) ? -1 : 1;
  return Configuration(std::move(spins));
}

Configuration Configuration::flipped() const {
  std::vector<int> s(spins_);
  for (int& x : s) x = -x;
  return Configuration(std::move(s));
}

InstanceDescription Instance::describe() const {
  InstanceDescription d;
  d.fields = fields_;
  d.beta = beta_;
  for (const Triangle& t : triangles_) {
    d.triangles.push_back({{static_cast<long long>(t.vertices[0]), static_cast<long long>(t.vertices[1]),
                            static_cast<long long>(t.vertices[2])},
                           t.coupling});
  }
  return d;
}

Instance build_instance(const InstanceDescription& spec) {
  const double beta = spec.beta.value_or(1.0);
  if (!std::isfinite(beta) || beta <= 0.0) throw InvalidInput("beta must be positive and finite");

  const auto n = static_cast<long long>(spec.fields.size());
  for (double h : spec.fields) {
    if (!std::isfinite(h)) throw InvalidInput("fields must be finite");
  }

  Instance inst;
  inst.beta_ = beta;
  inst.fields_ = spec.fields;

  std::set<std::array<VertexId, 3>> seen;
  for (std::size_t t = 0; t < spec.triangles.size(); ++t) {
    const auto& raw = spec.triangles[t];
    const std::string where = "triangle " + std::to_string(t);
    for (long long v : raw.vertices) {
      if (v < 0 || v >= n) throw InvalidInput(where + ": vertex id out of range");
    }
    if (!std::isfinite(raw.coupling)) throw InvalidInput(where + ": coupling must be finite");

    std::array<VertexId, 3> verts{static_cast<VertexId>(raw.vertices[0]), static_cast<VertexId>(raw.vertices[1]),
                                  static_cast<VertexId>(raw.vertices[2])};
    std::sort(verts.begin(), verts.end());
    if (verts[0] == verts[1] || verts[1] == verts[2]) throw InvalidInput(where + ": repeated vertex");
    if (!seen.insert(verts).second) throw InvalidInput(where + ": duplicate triangle");

    const double theta = std::tanh(beta * raw.coupling);
    // tanh saturates to exactly +-1 for |beta*J| > ~19; the message update needs |theta| < 1.
    if (!(std::abs(theta) < 1.0)) throw InvalidInput(where + ": |tanh(beta*J)| rounds to 1");
    inst.triangles_.push_back({verts, raw.coupling, theta});
  }

  std::sort(inst.triangles_.begin(), inst.triangles_.end(),
            [](const Triangle& a, const Triangle& b) { return a.vertices < b.vertices; });

  inst.incidence_.assign(inst.fields_.size(), {});
  for (TriangleIndex t = 0; t < inst.triangles_.size(); ++t) {
    for (std::size_t p = 0; p < 3; ++p) inst.incidence_[inst.triangles_[t].vertices[p]].push_back({t, p});
  }
  return inst;
}

std::size_t hyper_degree(const Instance& instance, VertexId vertex) {
  if (vertex >= instance.n_vertices()) throw InvalidInput("vertex out of range");
  return instance.incidence(vertex).size();
}

bool is_ferromagnetic(const Instance& instance) {
  for (const Triangle& t : instance.triangles()) {
    if (t.coupling < 0.0) return false;
  }
  for (double h : instance.fields()) {
    if (h < 0.0) return false;
  }
  return true;
}

double energy(const Instance& instance, const Configuration& config) {
  if (config.size() != instance.n_vertices()) throw InvalidInput("configuration length mismatch");
  double e = 0.0;
  for (VertexId v = 0; v < instance.n_vertices(); ++v) e -= instance.field(v) * config[v];
  for (const Triangle& t : instance.triangles()) {
    e -= t.coupling * config[t.vertices[0]] * config[t.vertices[1]] * config[t.vertices[2]];
  }
  return e;
}

}  // namespace motifbp
