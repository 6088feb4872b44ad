#include "dyson/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <set>
#include <thread>

#include "dyson/diagnostics.hpp"
#include "dyson/errors.hpp"

namespace dyson {

RunRecord run_scenario(const Scenario& sc) {
  RunRecord rec;
  rec.scenario = sc.name;
  rec.config_hash = config_hash(sc);
  rec.seed = sc.seed;
  if (sc.domain) {
    rec.domain_kind = sc.domain->is_torus() ? "torus" : "line";
    rec.half_width = sc.domain->half_width();
    rec.n_points = sc.domain->size();
  }
  if (!sc.solver) return rec;

  const SolverConfig& cfg = *sc.solver;
  rec.epsilon = cfg.epsilon;
  const DensityField u0 = initial_density(sc);
  RecordOptions opts;
  opts.holder = sc.holder;

  auto stored = [&](double t) {
    if (sc.store_all) return true;
    return std::any_of(sc.store_times.begin(), sc.store_times.end(),
                       [t](double s) { return std::abs(s - t) <= 1e-12 * std::max(1.0, std::abs(t)); });
  };
  auto observe = [&](const State& s) {
    rec.records.push_back(compute_record(s.u, opts));
    if (cfg.drift.active()) {
      rec.drift_hhalf_source.push_back(drift_hhalf_source(s.u, cfg.drift));
      rec.drift_entropy_source.push_back(drift_entropy_source(s.u, cfg.drift));
    }
    if (sc.lemma_check) rec.lemma_margin.push_back(holder_lemma_check(s.u, cfg.tol_neg).margin);
    if (sc.power_terms) rec.power.push_back(power_terms(s.u));
    if (stored(s.time)) rec.fields.push_back({s.time, s.u.values});
  };

  const auto t0 = std::chrono::steady_clock::now();
  try {
    run(u0, cfg, observe);
  } catch (const std::invalid_argument& e) {
    throw NumericalError(std::string("solver rejected the initial state: ") + e.what(), u0.time);
  }
  rec.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

unsigned thread_cap() {
  if (const char* env = std::getenv("DYSON_LAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ScenarioBank::ScenarioBank(std::vector<Scenario> scenarios) : scenarios_(std::move(scenarios)) {
  for (const auto& s : scenarios_) slots_[s.name] = std::make_unique<Slot>();
}

bool ScenarioBank::knows(const std::string& name) const { return slots_.count(name) != 0; }

const Scenario& ScenarioBank::scenario(const std::string& name) {
  for (const auto& s : scenarios_) {
    if (s.name == name) return s;
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

const RunRecord& ScenarioBank::run(const std::string& name) {
  const Scenario& sc = scenario(name);
  Slot& slot = *slots_.at(name);
  std::call_once(slot.once, [&] {
    try {
      slot.record = run_scenario(sc);
    } catch (const NumericalError& e) {
      slot.record.scenario = sc.name;
      slot.record.config_hash = config_hash(sc);
      slot.record.failure = e.what();
      slot.record.failure_time = e.time();
    } catch (const std::exception& e) {
      slot.record.scenario = sc.name;
      slot.record.config_hash = config_hash(sc);
      slot.record.failure = e.what();
    }
  });
  return slot.record;
}

void ScenarioBank::prefetch(const std::vector<std::string>& names, unsigned threads) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < names.size(); i = next++) run(names[i]);
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(names.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < count; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

std::vector<Scenario> select_suite(const std::vector<Scenario>& all, const std::string& suite) {
  if (suite.empty() || suite == "full") return all;
  static const std::set<std::string> known{"operators", "line", "periodic", "drift"};
  if (!known.count(suite)) throw ConfigError("unknown suite '" + suite + "' (operators, line, periodic, drift, full)");
  std::vector<Scenario> out;
  for (const auto& s : all) {
    if (s.suite == suite) out.push_back(s);
  }
  return out;
}

std::string format_verdict(const Verdict& v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.6g %s %.6g", v.measured, v.relation.c_str(), v.tolerance);
  std::string line = std::string(v.passed ? "[PASS] " : "[FAIL] ") + v.check + " / " + v.aspect + " @ " + v.scenario +
                     ": " + buf;
  if (!v.detail.empty()) line += "  (" + v.detail + ")";
  return line;
}

std::vector<CriterionLine> summarize(const std::vector<Verdict>& verdicts) {
  std::vector<CriterionLine> out;
  for (const auto& spec : check_registry()) {
    CriterionLine line;
    line.criterion = spec.criterion;
    line.check = spec.name;
    for (const auto& v : verdicts) {
      if (v.check != spec.name) continue;
      ++line.aspects;
      if (!v.passed) {
        if (line.failed == 0) line.worst = format_verdict(v);
        ++line.failed;
      }
    }
    if (line.aspects == 0) continue;
    line.passed = line.failed == 0;
    out.push_back(std::move(line));
  }
  return out;
}

SuiteResult verify(const std::string& suite, const std::string& out_dir, const std::string& scenario_dir,
                   std::ostream& log) {
  const std::vector<Scenario> all = load_scenario_dir(scenario_dir);
  const std::vector<Scenario> selected = select_suite(all, suite);
  ScenarioBank bank(all);

  std::vector<std::string> needed;
  for (const auto& s : selected) {
    if (s.has_solver()) needed.push_back(s.name);
    for (const auto& c : s.checks) {
      if (!c.params.contains("companion")) continue;
      const auto name = c.params.at("companion").get<std::string>();
      if (!bank.knows(name)) throw ConfigError("scenario '" + s.name + "' refers to unknown companion '" + name + "'");
      if (std::find(needed.begin(), needed.end(), name) == needed.end()) needed.push_back(name);
    }
  }
  const unsigned threads = thread_cap();
  log << "running " << needed.size() << " scenario(s) on up to " << threads << " thread(s)\n" << std::flush;
  bank.prefetch(needed, threads);

  SuiteResult result;
  for (const auto& s : selected) {
    RunRecord rec = bank.run(s.name);
    rec.verdicts = evaluate_checks(s, rec, &bank);
    for (const auto& v : rec.verdicts) {
      log << format_verdict(v) << '\n';
      result.passed = result.passed && v.passed;
    }
    result.verdicts.insert(result.verdicts.end(), rec.verdicts.begin(), rec.verdicts.end());
    result.scenarios.push_back(s.name);
    if (!out_dir.empty() && s.has_solver()) {
      write_run_dir(rec, (std::filesystem::path(out_dir) / s.name).string());
    }
  }
  if (!out_dir.empty()) write_verdicts(result.verdicts, (std::filesystem::path(out_dir) / "verdicts.json").string());
  log << "\n";
  for (const auto& line : summarize(result.verdicts)) {
    char head[64];
    std::snprintf(head, sizeof head, "%2d %-22s", line.criterion, line.check.c_str());
    log << (line.passed ? "PASS " : "FAIL ") << head << " " << (line.aspects - line.failed) << "/" << line.aspects
        << " aspects";
    if (!line.passed) log << "  first failure: " << line.worst;
    log << '\n';
  }
  log << std::flush;
  return result;
}

}  // namespace dyson
