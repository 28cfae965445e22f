#include "motifbp/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "motifbp/errors.hpp"

namespace motifbp {

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& what) {
  if (!obj.is_object()) throw InvalidInput(what + " must be a JSON object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) throw InvalidInput(what + ": unexpected field \"" + item.key() + "\"");
  }
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw InvalidInput(what + " must be a number");
  return v.get<double>();
}

json node_json(const NodeDistribution& d) { return json::array({d[0], d[1]}); }

json triangle_json(const TriangleDistribution& d) {
  json a = json::array();
  for (double x : d) a.push_back(x);
  return a;
}

json law_to_json(const ValueLaw& law) { return {{"min", law.min}, {"max", law.max}}; }

ValueLaw law_from_json(const json& v, const std::string& what) {
  if (v.is_number()) return ValueLaw::constant(v.get<double>());
  reject_unknown_keys(v, {"min", "max"}, what);
  return {number(v.at("min"), what + ".min"), number(v.at("max"), what + ".max")};
}

}  // namespace

Instance instance_from_json(const json& doc) {
  reject_unknown_keys(doc, {"beta", "h", "triangles"}, "instance");
  InstanceDescription d;
  if (doc.contains("beta")) d.beta = number(doc["beta"], "beta");
  if (!doc.contains("h") || !doc["h"].is_array()) throw InvalidInput("instance: \"h\" must be an array");
  for (const json& h : doc["h"]) d.fields.push_back(number(h, "h entry"));
  if (!doc.contains("triangles") || !doc["triangles"].is_array()) {
    throw InvalidInput("instance: \"triangles\" must be an array");
  }
  for (const json& t : doc["triangles"]) {
    reject_unknown_keys(t, {"v", "J"}, "triangle");
    if (!t.contains("v") || !t["v"].is_array() || t["v"].size() != 3) {
      throw InvalidInput("triangle: \"v\" must list three vertex ids");
    }
    InstanceDescription::TriangleSpec spec;
    for (std::size_t k = 0; k < 3; ++k) {
      if (!t["v"][k].is_number_integer()) throw InvalidInput("triangle: vertex ids must be integers");
      spec.vertices[k] = t["v"][k].get<long long>();
    }
    if (!t.contains("J")) throw InvalidInput("triangle: missing \"J\"");
    spec.coupling = number(t["J"], "J");
    d.triangles.push_back(spec);
  }
  return build_instance(d);
}

json instance_to_json(const Instance& instance) {
  json doc;
  doc["beta"] = instance.beta();
  doc["h"] = json::array();
  for (double h : instance.fields()) doc["h"].push_back(h);
  doc["triangles"] = json::array();
  for (const Triangle& t : instance.triangles()) {
    doc["triangles"].push_back({{"v", {t.vertices[0], t.vertices[1], t.vertices[2]}}, {"J", t.coupling}});
  }
  return doc;
}

std::string instance_to_string(const Instance& instance) { return instance_to_json(instance).dump(2) + "\n"; }

Instance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open instance file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("instance file " + path.string() + ": " + e.what());
  }
  return instance_from_json(doc);
}

json messages_to_json(const Messages& messages) {
  json a = json::array();
  for (std::size_t t = 0; t < messages.n_triangles(); ++t) {
    a.push_back({messages.at({t, 0}), messages.at({t, 1}), messages.at({t, 2})});
  }
  return a;
}

Messages messages_from_json(const json& doc) {
  if (!doc.is_array()) throw InvalidInput("messages must be an array of triples");
  std::vector<double> values;
  for (const json& t : doc) {
    if (!t.is_array() || t.size() != 3) throw InvalidInput("messages must be an array of triples");
    for (const json& v : t) values.push_back(number(v, "message"));
  }
  return Messages::from_values(std::move(values));
}

json exact_to_json(const ExactResult& result) {
  json doc;
  doc["log_partition"] = result.log_partition;
  doc["one_node_marginals"] = json::array();
  for (const auto& d : result.one_node_marginals) doc["one_node_marginals"].push_back(node_json(d));
  doc["three_node_marginals"] = json::array();
  for (const auto& d : result.three_node_marginals) doc["three_node_marginals"].push_back(triangle_json(d));
  return doc;
}

json energy_to_json(const EnergyReport& report) {
  return {{"dual_nu", report.dual_nu},
          {"dual_lambda", report.dual_lambda},
          {"primal", report.primal},
          {"grad_inf_norm", report.grad_inf_norm}};
}

json bp_config_to_json(const BPConfig& config) {
  return {{"schedule", config.schedule == Schedule::synchronous ? "synchronous" : "sequential"},
          {"tolerance", config.tolerance},
          {"max_iters", config.max_iters},
          {"damping", config.damping},
          {"init_value", config.init_value},
          {"record_trace", config.record_trace}};
}

json bp_result_to_json(const BPRunResult& result, const EnergyReport& energies) {
  json doc;
  doc["converged"] = result.converged;
  doc["iterations"] = result.iterations;
  doc["monotone_decreasing"] = result.monotone_decreasing;
  doc["final_residual"] = result.residual_trace.empty() ? json(nullptr) : json(result.residual_trace.back());
  doc["final_messages"] = messages_to_json(result.final_messages);
  doc["energies"] = energy_to_json(energies);
  if (result.message_trace) {
    doc["message_trace"] = json::array();
    for (const Messages& m : *result.message_trace) doc["message_trace"].push_back(messages_to_json(m));
  }
  return doc;
}

json generator_spec_to_json(const GeneratorSpec& spec) {
  json doc;
  doc["kind"] = to_string(spec.kind);
  doc["n_triangles"] = spec.n_triangles;
  if (spec.kind == GeneratorKind::random_motif) doc["n_vertices"] = spec.n_vertices;
  doc["J"] = law_to_json(spec.coupling);
  doc["h"] = law_to_json(spec.field);
  doc["beta"] = spec.beta;
  doc["seed"] = spec.seed;
  doc["ferromagnetic"] = spec.ferromagnetic;
  return doc;
}

GeneratorSpec generator_spec_from_json(const json& doc) {
  reject_unknown_keys(doc, {"kind", "n_triangles", "n_vertices", "J", "h", "beta", "seed", "ferromagnetic"},
                      "generator spec");
  GeneratorSpec spec;
  try {
    spec.kind = generator_kind_from_string(doc.at("kind").get<std::string>());
    spec.n_triangles = doc.at("n_triangles").get<std::size_t>();
    if (doc.contains("n_vertices")) spec.n_vertices = doc["n_vertices"].get<std::size_t>();
    if (doc.contains("J")) spec.coupling = law_from_json(doc["J"], "J");
    if (doc.contains("h")) spec.field = law_from_json(doc["h"], "h");
    if (doc.contains("beta")) spec.beta = number(doc["beta"], "beta");
    if (doc.contains("seed")) spec.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("ferromagnetic")) spec.ferromagnetic = doc["ferromagnetic"].get<bool>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("generator spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

json xstar_to_json(const XStarEstimate& estimate) {
  json doc;
  doc["xstar"] = estimate.value;
  doc["c_policy"] = estimate.c_policy;
  doc["per_pair"] = json::array();
  for (const PairRoot& p : estimate.per_pair) {
    doc["per_pair"].push_back({{"triangle", p.pair.triangle},
                               {"position", p.pair.position},
                               {"root", p.root},
                               {"C", p.c},
                               {"effective_degree", p.effective_degree},
                               {"theta", p.theta},
                               {"field", p.field},
                               {"sign_changes", p.sign_changes}});
  }
  return doc;
}

json audit_to_json(const AuditReport& report) {
  return {{"samples", report.samples},
          {"pre_fixpoint", report.pre},
          {"post_fixpoint", report.post},
          {"fixed_point", report.fixed},
          {"neither", report.neither},
          {"max_pre_violation", report.max_pre_violation},
          {"max_post_violation", report.max_post_violation},
          {"passed", report.passed}};
}

json census_to_json(const FixedPointCensus& census) {
  json doc;
  doc["runs"] = census.runs;
  doc["nonconverged"] = census.nonconverged;
  doc["dominant"] = census.dominant ? json(*census.dominant) : json(nullptr);
  doc["dominance_holds"] = census.dominance_holds;
  doc["max_dual_nu_gap"] = census.max_dual_nu_gap;
  doc["optimal"] = census.optimal;
  doc["fixed_points"] = json::array();
  for (std::size_t k = 0; k < census.fixed_points.size(); ++k) {
    const CensusPoint& p = census.fixed_points[k];
    doc["fixed_points"].push_back({{"id", k},
                                   {"dual_nu", p.dual_nu},
                                   {"dual_lambda", p.dual_lambda},
                                   {"residual", p.residual},
                                   {"reached_from", p.reached_from},
                                   {"in_region", p.in_region},
                                   {"dominated", p.dominated},
                                   {"messages", messages_to_json(p.messages)}});
  }
  return doc;
}

json probe_to_json(const ProbeReport& report) {
  return {{"samples", report.samples}, {"violations", report.violations}, {"worst", report.worst}};
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const BPRunResult& result) {
  out << "iteration,residual,dual_free_energy_nu,min_message,max_message\n";
  for (std::size_t t = 0; t < result.iterations; ++t) {
    out << (t + 1) << ',' << format_double(result.residual_trace[t]) << ',' << format_double(result.dual_nu_trace[t])
        << ',' << format_double(result.min_message_trace[t]) << ',' << format_double(result.max_message_trace[t])
        << '\n';
  }
}

json RunManifest::to_json() const {
  return {{"command", command}, {"input", input},     {"config", config},        {"outputs", outputs},
          {"seed", seed},       {"tool_version", tool_version}, {"timestamp", timestamp}};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace motifbp
