#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "dyson/checks.hpp"
#include "dyson/run_record.hpp"
#include "dyson/scenario.hpp"

namespace dyson {

/// Integrates the scenario and collects diagnostics; checks are not
/// evaluated. Numerical failures propagate as NumericalError.
RunRecord run_scenario(const Scenario& scenario);

/// Suite parallelism: DYSON_LAB_THREADS if set, else the hardware count.
unsigned thread_cap();

/// Runs scenarios on demand and caches them. Failed runs are cached with
/// `failure` set instead of throwing.
class ScenarioBank : public RunBank {
 public:
  explicit ScenarioBank(std::vector<Scenario> scenarios);

  const RunRecord& run(const std::string& scenario) override;
  const Scenario& scenario(const std::string& name) override;
  bool knows(const std::string& name) const;

  /// Runs the named scenarios concurrently, at most `threads` at a time.
  void prefetch(const std::vector<std::string>& names, unsigned threads);

 private:
  struct Slot {
    std::once_flag once;
    RunRecord record;
  };
  std::vector<Scenario> scenarios_;
  std::map<std::string, std::unique_ptr<Slot>> slots_;
};

struct SuiteResult {
  std::vector<Verdict> verdicts;
  std::vector<std::string> scenarios;
  bool passed = true;
};

struct CriterionLine {
  int criterion = 0;
  std::string check;
  bool passed = true;
  std::size_t aspects = 0;
  std::size_t failed = 0;
  std::string worst;  // description of the first failing (or last) aspect
};

/// Suite names: "full" (or empty), "operators", "line", "periodic", "drift".
/// Throws ConfigError for an unknown suite.
std::vector<Scenario> select_suite(const std::vector<Scenario>& all, const std::string& suite);

/// Runs the suite, evaluates its checks, writes per-run directories and
/// verdicts.json under out_dir (when non-empty) and prints a table to `log`.
SuiteResult verify(const std::string& suite, const std::string& out_dir, const std::string& scenario_dir,
                   std::ostream& log);

std::vector<CriterionLine> summarize(const std::vector<Verdict>& verdicts);
std::string format_verdict(const Verdict& v);

}  // namespace dyson
