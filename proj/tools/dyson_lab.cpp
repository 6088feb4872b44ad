// dyson-lab: run scenarios, verify the acceptance suite, export reports.
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dyson/checks.hpp"
#include "dyson/errors.hpp"
#include "dyson/harness.hpp"
#include "dyson/run_record.hpp"
#include "dyson/scenario.hpp"

namespace {

namespace fs = std::filesystem;
using namespace dyson;

int cmd_run(const std::string& path, std::string out) {
  Scenario sc = load_scenario(path);
  std::vector<Scenario> bank_list;
  const std::string dir = default_scenario_dir();
  if (fs::is_directory(dir)) {
    for (auto& s : load_scenario_dir(dir)) {
      if (s.name != sc.name) bank_list.push_back(std::move(s));
    }
  }
  bank_list.push_back(sc);
  ScenarioBank bank(bank_list);

  RunRecord rec = run_scenario(sc);  // NumericalError propagates to exit 3
  rec.verdicts = evaluate_checks(sc, rec, &bank);
  if (out.empty()) out = (fs::path("runs") / sc.name).string();
  write_run_dir(rec, out);
  bool ok = true;
  for (const auto& v : rec.verdicts) {
    std::cout << format_verdict(v) << '\n';
    ok = ok && v.passed;
  }
  std::cout << rec.records.size() << " records, " << rec.fields.size() << " stored fields, " << rec.runtime_seconds
            << " s; written to " << out << '\n';
  return ok ? 0 : 1;
}

int cmd_verify(const std::string& suite, const std::string& out, const std::string& dir) {
  const SuiteResult res = verify(suite, out, dir, std::cout);
  return res.passed ? 0 : 1;
}

int cmd_report(const std::string& run_dir, const std::string& format, std::string out) {
  const RunRecord rec = read_run_dir(run_dir);
  if (out.empty()) out = run_dir;
  if (format == "csv") write_csv(rec, out);
  else if (format == "json") write_json(rec, out);
  else if (format == "plot-data") write_plot_data(rec, out);
  else throw ConfigError("unknown report format '" + format + "'");
  std::cout << "wrote " << format << " for " << rec.scenario << " to " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral solver and verification harness for the Dyson equation"};
  app.require_subcommand(1);

  std::string scenario_path, run_out;
  auto* run = app.add_subcommand("run", "Run one scenario file and evaluate its checks");
  run->add_option("scenario", scenario_path, "Scenario TOML file")->required();
  run->add_option("--out", run_out, "Output directory (default runs/<name>)");

  std::string suite, verify_out, scenario_dir = dyson::default_scenario_dir();
  auto* ver = app.add_subcommand("verify", "Run the acceptance suite");
  ver->add_option("--suite", suite, "operators | line | periodic | drift | full");
  ver->add_option("--out", verify_out, "Directory for run outputs and verdicts.json");
  ver->add_option("--scenarios", scenario_dir, "Scenario directory");

  std::string run_dir, format, report_out;
  auto* rep = app.add_subcommand("report", "Export a finished run");
  rep->add_option("run-dir", run_dir, "Run directory")->required();
  rep->add_option("--format", format, "csv | json | plot-data")->required()->check(CLI::IsMember({"csv", "json", "plot-data"}));
  rep->add_option("--out", report_out, "Output directory (default: the run directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(scenario_path, run_out);
    if (*ver) return cmd_verify(suite, verify_out, scenario_dir);
    if (*rep) return cmd_report(run_dir, format, report_out);
  } catch (const dyson::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const dyson::NumericalError& e) {
    std::cerr << "numerical failure at t = " << e.time() << ": " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
