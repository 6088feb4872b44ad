#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dyson/diagnostics.hpp"
#include "dyson/domain.hpp"
#include "json.hpp"

namespace dyson {

struct StoredField {
  double time = 0.0;
  std::vector<double> values;
  bool operator==(const StoredField&) const = default;
};

/// Outcome of one check aspect on one scenario.
struct Verdict {
  std::string check;
  std::string aspect;
  int criterion = 0;
  std::string scenario;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string relation;  // how measured is compared with tolerance, e.g. "<=" or ">="
  std::string detail;
  bool operator==(const Verdict&) const = default;
};

struct RunRecord {
  std::string scenario;
  std::string config_hash;
  std::string domain_kind;  // "torus" | "line"
  double half_width = 0.0;
  std::size_t n_points = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::vector<DiagnosticsRecord> records;
  /// Per record, filled for drift runs.
  std::vector<double> drift_hhalf_source;
  std::vector<double> drift_entropy_source;
  /// Per record, filled when the scenario asks for the Hölder lemma check.
  std::vector<double> lemma_margin;
  std::vector<PowerTerms> power;
  std::vector<StoredField> fields;
  std::vector<Verdict> verdicts;
  double runtime_seconds = 0.0;
  std::optional<std::string> failure;
  std::optional<double> failure_time;

  bool operator==(const RunRecord&) const = default;

  bool has_domain() const { return n_points > 0; }
  Domain domain() const;
  const StoredField* field_at(double time, double tol = 1e-9) const;
};

nlohmann::json to_json(const Verdict& v);
Verdict verdict_from_json(const nlohmann::json& j);

/// Full record, fields included inline.
nlohmann::json to_json(const RunRecord& run);
RunRecord run_record_from_json(const nlohmann::json& j);

extern const char* const kCsvHeader;

/// Header plus one row per diagnostics record, 17 significant digits.
std::string records_csv(const RunRecord& run);

/// Writes run.json (fields referenced, not inlined), fields/*.bin with JSON
/// sidecars, diagnostics.csv, verdicts.json and plot/*.dat.
void write_run_dir(const RunRecord& run, const std::string& dir);
RunRecord read_run_dir(const std::string& dir);

void write_csv(const RunRecord& run, const std::string& dir);
void write_json(const RunRecord& run, const std::string& dir);
void write_plot_data(const RunRecord& run, const std::string& dir);
void write_verdicts(const std::vector<Verdict>& verdicts, const std::string& path);

}  // namespace dyson
