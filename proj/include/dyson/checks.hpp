#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dyson/run_record.hpp"
#include "dyson/scenario.hpp"
#include "json.hpp"

namespace dyson {

/// Source of completed runs for checks that compare against a companion
/// scenario.
class RunBank {
 public:
  virtual ~RunBank() = default;
  virtual const RunRecord& run(const std::string& scenario) = 0;
  virtual const Scenario& scenario(const std::string& name) = 0;
};

struct CheckInput {
  const Scenario& scenario;
  const RunRecord& run;
  const nlohmann::json& params;
  RunBank* bank = nullptr;
};

struct CheckSpec {
  std::string name;
  int criterion = 0;
  std::string summary;
  /// False for checks that build their own fields (operator suites).
  bool needs_run = true;
  std::function<std::vector<Verdict>(const CheckInput&)> evaluate;
};

/// One entry per acceptance criterion, ordered by criterion number.
const std::vector<CheckSpec>& check_registry();
const CheckSpec* find_check(const std::string& name);

/// Evaluates every check requested by the scenario against its run.
std::vector<Verdict> evaluate_checks(const Scenario& scenario, const RunRecord& run, RunBank* bank);

}  // namespace dyson
