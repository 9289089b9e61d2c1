#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "nashseek/sim_engine.hpp"

namespace nashseek {

// A parsed scenario file. `document` is the raw (override-applied) config;
// `scenario` is what the engine runs.
struct ScenarioConfig {
  nlohmann::json document;
  Scenario scenario;
  double tolerance = 1e-2;
};

// Names accepted by builtin_config().
std::vector<std::string> builtin_names();

// Throws ConfigError for unknown names.
nlohmann::json builtin_config(const std::string& name);

// Applies "a.b.c=value" to the document. Values are parsed as JSON when
// possible and kept as strings otherwise. Numeric path segments index arrays.
void apply_override(nlohmann::json& document, const std::string& assignment);

// Parses and validates. Throws ConfigError naming the offending key.
ScenarioConfig parse_config(const nlohmann::json& document);

// `source` is either "builtin:<name>" or a path to a JSON file.
nlohmann::json load_document(const std::string& source);
ScenarioConfig load_config(const std::string& source,
                           const std::vector<std::string>& overrides = {});

// Copy of the document with every players.<i>.hidden section replaced.
nlohmann::json redact_hidden(const nlohmann::json& document);

// Stable 64-bit FNV-1a digest of the canonical JSON dump, as hex.
std::string config_hash(const nlohmann::json& document);

}  // namespace nashseek
