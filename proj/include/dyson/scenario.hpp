#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dyson/domain.hpp"
#include "dyson/evolution.hpp"
#include "dyson/oracle.hpp"
#include "json.hpp"

namespace dyson {

struct CheckRequest {
  std::string name;
  nlohmann::json params = nlohmann::json::object();  // tolerance overrides and extras
};

/// Closed-form initial data that is not a measure mixture.
struct InitialPreset {
  std::string kind;        // "uniform" | "cosine" (torus: (1 + A cos θ)/2π)
  double amplitude = 0.0;
};

struct Scenario {
  std::string name;
  std::string description;
  std::string suite;  // operators | line | periodic | drift
  std::optional<Domain> domain;
  std::optional<oracle::InitialMeasure> measure;
  std::optional<InitialPreset> preset;
  double mollifier_width = 0.0;
  /// Absent for scenarios that only exercise operators.
  std::optional<SolverConfig> solver;
  double t_start = 0.0;
  std::vector<double> store_times;
  bool store_all = false;
  bool holder = true;
  bool lemma_check = false;
  bool power_terms = false;
  std::uint64_t seed = 0x5eedULL;
  std::vector<CheckRequest> checks;
  /// Parsed file contents; the config hash is computed from this.
  nlohmann::json source;

  bool has_solver() const { return solver.has_value(); }
};

/// Builds and validates a scenario. Throws ConfigError on malformed input,
/// including unknown check names.
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

/// All *.toml scenarios in a directory, sorted by name.
std::vector<Scenario> load_scenario_dir(const std::string& dir);

/// Directory holding the built-in scenarios (DYSON_LAB_SCENARIO_DIR overrides).
std::string default_scenario_dir();

/// FNV-1a over the canonical JSON dump of the scenario contents.
std::string config_hash(const Scenario& scenario);

/// Record times: t_start, then the schedule from the [schedule] table.
std::vector<double> make_schedule(const nlohmann::json& schedule, double t_start, double t_end);

DensityField initial_density(const Scenario& scenario);

}  // namespace dyson
