#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"
#include "motifbp/bethe.hpp"
#include "motifbp/bp.hpp"
#include "motifbp/exact.hpp"
#include "motifbp/generators.hpp"
#include "motifbp/instance.hpp"
#include "motifbp/landscape.hpp"

namespace motifbp {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

// Instance file: { "beta": real, "h": [real...], "triangles": [{"v": [i,j,k], "J": real}...] }.
// Unknown keys are rejected; "beta" may be omitted (defaults to 1).
Instance instance_from_json(const json& doc);
json instance_to_json(const Instance& instance);
// Canonical text form: 2-space indented JSON plus trailing newline.
std::string instance_to_string(const Instance& instance);
Instance read_instance(const std::filesystem::path& path);

// [[nu_0, nu_1, nu_2], ...] aligned with the triangle list.
json messages_to_json(const Messages& messages);
Messages messages_from_json(const json& doc);

json exact_to_json(const ExactResult& result);
json energy_to_json(const EnergyReport& report);
json bp_config_to_json(const BPConfig& config);
json bp_result_to_json(const BPRunResult& result, const EnergyReport& energies);

json generator_spec_to_json(const GeneratorSpec& spec);
GeneratorSpec generator_spec_from_json(const json& doc);

json xstar_to_json(const XStarEstimate& estimate);
json audit_to_json(const AuditReport& report);
json census_to_json(const FixedPointCensus& census);
json probe_to_json(const ProbeReport& report);

// CSV header: iteration,residual,dual_free_energy_nu,min_message,max_message
void write_trace_csv(std::ostream& out, const BPRunResult& result);

// Shortest round-trip decimal text of a double.
std::string format_double(double v);

struct RunManifest {
  std::string command;
  json input;    // instance path or generator spec
  json config;   // command options
  json outputs;  // paths written
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  std::string timestamp;  // the only field that varies between identical runs

  json to_json() const;
};

// UTC, ISO 8601.
std::string utc_timestamp();

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace motifbp
