// motifbp: generate instances, run generalized BP, exact enumeration and
// landscape diagnostics. Exit codes: 0 ok, 1 input error, 2 BP did not
// converge, 3 instance too large for enumeration.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "motifbp/bethe.hpp"
#include "motifbp/bp.hpp"
#include "motifbp/errors.hpp"
#include "motifbp/exact.hpp"
#include "motifbp/generators.hpp"
#include "motifbp/io.hpp"
#include "motifbp/landscape.hpp"

namespace {

using motifbp::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitSizeGuard = 3;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MOTIFBP_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw motifbp::InvalidInput("MOTIFBP_SEED must be a non-negative integer");
    }
  }
  return 0;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    motifbp::write_text_file(path, text);
  }
}

struct GenOptions {
  std::string kind = "triangle-tree";
  std::size_t triangles = 1;
  std::size_t vertices = 0;
  std::optional<double> coupling, coupling_min, coupling_max;
  std::optional<double> field, field_min, field_max;
  double beta = 1.0;
  std::optional<std::uint64_t> seed;
  std::string spec_path;
  bool allow_negative = false;
  std::string output;
  std::string manifest;
};

motifbp::ValueLaw law(const std::optional<double>& constant, const std::optional<double>& lo,
                      const std::optional<double>& hi, double fallback) {
  if (lo || hi) {
    if (!lo || !hi) throw motifbp::InvalidInput("range needs both --*-min and --*-max");
    return motifbp::ValueLaw::uniform(*lo, *hi);
  }
  return motifbp::ValueLaw::constant(constant.value_or(fallback));
}

int cmd_gen(const GenOptions& o) {
  motifbp::GeneratorSpec spec;
  if (!o.spec_path.empty()) {
    std::ifstream in(o.spec_path);
    if (!in) throw motifbp::InvalidInput("cannot open spec file " + o.spec_path);
    try {
      spec = motifbp::generator_spec_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
      throw motifbp::InvalidInput(std::string("spec file: ") + e.what());
    }
  } else {
    spec.kind = motifbp::generator_kind_from_string(o.kind);
    spec.n_triangles = o.triangles;
    spec.n_vertices = o.vertices;
    spec.coupling = law(o.coupling, o.coupling_min, o.coupling_max, 1.0);
    spec.field = law(o.field, o.field_min, o.field_max, 0.0);
    spec.beta = o.beta;
    spec.seed = o.seed.value_or(default_seed());
    spec.ferromagnetic = !o.allow_negative;
  }
  const motifbp::Instance inst = motifbp::generate(spec);
  emit(o.output, motifbp::instance_to_string(inst));

  if (!o.manifest.empty()) {
    motifbp::RunManifest m;
    m.command = "gen";
    m.input = motifbp::generator_spec_to_json(spec);
    m.config = json::object();
    m.outputs = {{"instance", o.output}};
    m.seed = spec.seed;
    m.timestamp = motifbp::utc_timestamp();
    motifbp::write_text_file(o.manifest, json{{"manifest", m.to_json()}}.dump(2) + "\n");
  }
  return kExitOk;
}

struct BpOptions {
  std::string instance;
  std::string schedule = "synchronous";
  double tolerance = 1e-10;
  std::size_t max_iters = 10000;
  double damping = 0.0;
  double init = 1.0;
  bool record_messages = false;
  std::string trace;
  std::string output;
};

int cmd_bp(const BpOptions& o) {
  const motifbp::Instance inst = motifbp::read_instance(o.instance);
  motifbp::BPConfig cfg;
  if (o.schedule == "synchronous") {
    cfg.schedule = motifbp::Schedule::synchronous;
  } else if (o.schedule == "sequential") {
    cfg.schedule = motifbp::Schedule::sequential;
  } else {
    throw motifbp::InvalidInput("unknown schedule " + o.schedule);
  }
  cfg.tolerance = o.tolerance;
  cfg.max_iters = o.max_iters;
  cfg.damping = o.damping;
  cfg.init_value = o.init;
  cfg.record_trace = o.record_messages;
  cfg.validate();

  const motifbp::BPRunResult result = motifbp::run_bp(inst, cfg);
  const motifbp::EnergyReport energies = motifbp::energy_report(inst, result.final_messages);

  if (!o.trace.empty()) {
    std::ostringstream csv;
    motifbp::write_trace_csv(csv, result);
    motifbp::write_text_file(o.trace, csv.str());
  }

  motifbp::RunManifest m;
  m.command = "bp";
  m.input = o.instance;
  m.config = motifbp::bp_config_to_json(cfg);
  m.outputs = {{"result", o.output}, {"trace", o.trace}};
  m.timestamp = motifbp::utc_timestamp();

  json doc = motifbp::bp_result_to_json(result, energies);
  doc["manifest"] = m.to_json();
  emit(o.output, doc.dump(2) + "\n");
  return result.converged ? kExitOk : kExitNoConvergence;
}

int cmd_exact(const std::string& instance_path, const std::string& output) {
  const motifbp::Instance inst = motifbp::read_instance(instance_path);
  const motifbp::ExactResult result = motifbp::enumerate(inst);

  motifbp::RunManifest m;
  m.command = "exact";
  m.input = instance_path;
  m.config = json::object();
  m.outputs = {{"result", output}};
  m.timestamp = motifbp::utc_timestamp();

  json doc = motifbp::exact_to_json(result);
  doc["manifest"] = m.to_json();
  emit(output, doc.dump(2) + "\n");
  return kExitOk;
}

struct LandscapeOptions {
  std::string instance;
  std::size_t inits = 20;
  std::size_t samples = 200;
  std::size_t probes = 100;
  std::size_t grid = 10000;
  std::optional<double> c_override;
  std::optional<std::uint64_t> seed;
  bool force = false;
  std::string output;
};

int cmd_landscape(const LandscapeOptions& o) {
  const motifbp::Instance inst = motifbp::read_instance(o.instance);
  const std::uint64_t seed = o.seed.value_or(default_seed());
  const bool ferro = motifbp::is_ferromagnetic(inst);

  motifbp::XStarOptions xo;
  xo.grid_points = o.grid;
  xo.c_override = o.c_override;
  const motifbp::XStarEstimate xstar = motifbp::estimate_xstar(inst, xo);

  json doc;
  doc["ferromagnetic"] = ferro;
  doc["warning"] = ferro ? json(nullptr)
                         : json(o.force ? "instance is not ferromagnetic; audits forced"
                                        : "instance is not ferromagnetic; audits skipped (use --force)");
  const json xs = motifbp::xstar_to_json(xstar);
  doc["xstar"] = xs["xstar"];
  doc["c_policy"] = xs["c_policy"];
  doc["per_pair_roots"] = xs["per_pair"];

  if (ferro || o.force) {
    motifbp::BPConfig cfg;
    doc["audit"] = motifbp::audit_to_json(motifbp::gradient_sign_audit(inst, xstar.value, o.samples, seed));
    doc["census"] = motifbp::census_to_json(motifbp::fixed_point_census(inst, o.inits, seed + 1, cfg, xstar.value));
    doc["probes"] = {
        {"monotonicity", motifbp::probe_to_json(motifbp::monotonicity_probe(inst, xstar.value, o.probes, seed + 2))},
        {"concavity", motifbp::probe_to_json(motifbp::concavity_probe(inst, xstar.value, o.probes, seed + 3))}};
  } else {
    doc["audit"] = nullptr;
    doc["census"] = nullptr;
    doc["probes"] = nullptr;
  }

  motifbp::RunManifest m;
  m.command = "landscape";
  m.input = o.instance;
  m.config = {{"inits", o.inits}, {"samples", o.samples}, {"probes", o.probes},
              {"grid", o.grid},   {"C", o.c_override ? json(*o.c_override) : json(nullptr)},
              {"force", o.force}};
  m.outputs = {{"report", o.output}};
  m.seed = seed;
  m.timestamp = motifbp::utc_timestamp();
  doc["manifest"] = m.to_json();
  emit(o.output, doc.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized belief propagation for triangle-motif Ising models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", motifbp::kToolVersion);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "generate an instance file");
  g->set_help_flag("--help", "print this help");  // -h would shadow --h
  g->add_option("--kind", gen.kind, "triangle-tree | random-motif | shared-edge-chain");
  g->add_option("--triangles", gen.triangles, "number of triangles")->check(CLI::PositiveNumber);
  g->add_option("--vertices", gen.vertices, "vertex count (random-motif)");
  g->add_option("--J", gen.coupling, "constant coupling");
  g->add_option("--J-min", gen.coupling_min, "uniform coupling lower bound");
  g->add_option("--J-max", gen.coupling_max, "uniform coupling upper bound");
  g->add_option("--h", gen.field, "constant field");
  g->add_option("--h-min", gen.field_min, "uniform field lower bound");
  g->add_option("--h-max", gen.field_max, "uniform field upper bound");
  g->add_option("--beta", gen.beta, "inverse temperature");
  g->add_option("--seed", gen.seed, "seed (default: $MOTIFBP_SEED or 0)");
  g->add_option("--spec", gen.spec_path, "generator spec JSON (replaces the flags above)");
  g->add_flag("--allow-negative", gen.allow_negative, "permit negative couplings/fields");
  g->add_option("-o,--output", gen.output, "instance file (default stdout)");
  g->add_option("--manifest", gen.manifest, "write the run manifest here");

  BpOptions bp;
  auto* b = app.add_subcommand("bp", "run generalized BP from a constant start");
  b->add_option("instance", bp.instance, "instance JSON")->required();
  b->add_option("--schedule", bp.schedule, "synchronous | sequential");
  b->add_option("--tol", bp.tolerance, "max-abs change to stop");
  b->add_option("--max-iters", bp.max_iters, "sweep limit");
  b->add_option("--damping", bp.damping, "damping in [0, 1)");
  b->add_option("--init", bp.init, "initial message value in (-1, 1]");
  b->add_flag("--record-messages", bp.record_messages, "include every iterate in the result");
  b->add_option("--trace", bp.trace, "per-iteration CSV");
  b->add_option("-o,--output", bp.output, "result JSON (default stdout)");

  std::string exact_instance, exact_output;
  auto* e = app.add_subcommand("exact", "exact log Z and marginals by enumeration");
  e->add_option("instance", exact_instance, "instance JSON")->required();
  e->add_option("-o,--output", exact_output, "result JSON (default stdout)");

  LandscapeOptions land;
  auto* l = app.add_subcommand("landscape", "x* estimate, gradient sign audit, fixed-point census");
  l->add_option("instance", land.instance, "instance JSON")->required();
  l->add_option("--inits", land.inits, "random starts per box");
  l->add_option("--samples", land.samples, "audit samples");
  l->add_option("--probes", land.probes, "monotonicity/concavity probe samples");
  l->add_option("--grid", land.grid, "x* grid points");
  l->add_option("--C", land.c_override, "override the C constant");
  l->add_option("--seed", land.seed, "seed (default: $MOTIFBP_SEED or 0)");
  l->add_flag("--force", land.force, "run audits on non-ferromagnetic instances");
  l->add_option("-o,--output", land.output, "report JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& h) {
    return app.exit(h);
  } catch (const CLI::CallForVersion& v) {
    return app.exit(v);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitInput;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*b) return cmd_bp(bp);
    if (*e) return cmd_exact(exact_instance, exact_output);
    if (*l) return cmd_landscape(land);
  } catch (const motifbp::SizeGuardError& err) {
    std::cerr << "motifbp: " << err.what() << '\n';
    return kExitSizeGuard;
  } catch (const std::exception& err) {
    std::cerr << "motifbp: " << err.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
