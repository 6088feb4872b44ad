#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "dyson/checks.hpp"
#include "dyson/errors.hpp"
#include "dyson/harness.hpp"
#include "dyson/rng.hpp"
#include "dyson/run_record.hpp"
#include "dyson/scenario.hpp"
#include "dyson/toml_lite.hpp"

using namespace dyson;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dyson_lab_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

RunRecord sample_run() {
  RunRecord r;
  r.scenario = "sample";
  r.config_hash = "0123456789abcdef";
  r.domain_kind = "line";
  r.half_width = 4.0;
  r.n_points = 16;
  r.epsilon = 1e-3;
  r.seed = 42;
  for (int i = 0; i < 3; ++i) {
    DiagnosticsRecord d;
    d.time = 0.1 * (i + 1);
    d.mass = 1.0;
    d.second_moment = 0.1 + i / 3.0;
    d.entropy = -1.0 - 0.1 * i;
    d.rel_entropy = 0.5;
    d.fisher = 2.0 / 3.0;
    d.hhalf_sq = 1e-17 * (i + 1);
    d.linf = std::nextafter(0.25, 1.0);
    d.min_u = -1e-300;
    d.floor_activated = i == 1;
    r.records.push_back(d);
    r.power.push_back({d.time, 1.0, -0.5 * i, 0.25});
  }
  r.records[2].rel_entropy.reset();
  r.lemma_margin = {0.1, 0.2, 0.3};
  std::vector<double> v(16);
  for (std::size_t j = 0; j < 16; ++j) v[j] = 1.0 / 3.0 + 1e-17 * static_cast<double>(j);
  r.fields.push_back({0.3, v});
  r.verdicts.push_back({"entropy_balance", "max relative residual", 5, "sample", true, 1e-4, 1e-2, "<=", "note"});
  r.runtime_seconds = 1.5;
  return r;
}

}  // namespace

TEST_CASE("toml subset parser") {
  const auto doc = toml::parse(R"(
# comment
name = "demo"   # trailing comment
count = 42
ratio = -1.5e-3
big = inf
flag = true
literal = 'C:\path'
list = [1, 2.5,
        3]
point = { x = 1.0, y = "up" }
a.b.c = 7

[solver]
epsilon = 1e-4

[[checks]]
name = "one"

[[checks]]
name = "two"
tolerance = 0.5
)");
  CHECK(doc["name"] == "demo");
  CHECK(doc["count"] == 42);
  CHECK(doc["ratio"].get<double>() == -1.5e-3);
  CHECK(std::isinf(doc["big"].get<double>()));
  CHECK(doc["flag"] == true);
  CHECK(doc["literal"] == "C:\\path");
  CHECK(doc["list"].size() == 3);
  CHECK(doc["list"][1].get<double>() == 2.5);
  CHECK(doc["point"]["y"] == "up");
  CHECK(doc["a"]["b"]["c"] == 7);
  CHECK(doc["solver"]["epsilon"].get<double>() == 1e-4);
  REQUIRE(doc["checks"].size() == 2);
  CHECK(doc["checks"][1]["tolerance"].get<double>() == 0.5);

  CHECK_THROWS_AS(toml::parse("x = \n"), ConfigError);
  CHECK_THROWS_AS(toml::parse("x = 1\nx = 2\n"), ConfigError);
  try {
    toml::parse("a = 1\nb = [1, 2\n");
    FAIL("unterminated array accepted");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
}

TEST_CASE("scenario parsing and validation") {
  const auto base = toml::parse(R"(
name = "t"
suite = "periodic"
[domain]
kind = "torus"
n_points = 64
[initial]
preset = "cosine"
amplitude = 0.5
[solver]
epsilon = 1e-3
t_end = 1.0
[schedule]
kind = "uniform"
count = 4
[[checks]]
name = "hhalf_monotone"
)");
  const auto sc = scenario_from_json(base);
  CHECK(sc.name == "t");
  REQUIRE(sc.solver.has_value());
  CHECK(sc.solver->output_times == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  const auto u = initial_density(sc);
  CHECK(u.mass() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(u.max_value() == doctest::Approx(1.5 / (2 * std::numbers::pi)));

  auto bad = base;
  bad["checks"][0]["name"] = "no_such_check";
  CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);
  bad = base;
  bad["domain"]["kind"] = "sphere";
  CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);
  bad = base;
  bad["domain"]["n_points"] = 100;
  CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);
  bad = base;
  bad["solver"]["epsilon"] = -1.0;
  CHECK_THROWS_AS(scenario_from_json(bad), ConfigError);
}

TEST_CASE("output schedules") {
  using nlohmann::json;
  // schedules start with t_start so the initial state is recorded, and end at t_end
  CHECK(make_schedule(json{{"kind", "list"}, {"times", {0.5, 0.2}}}, 0.0, 1.0) == std::vector<double>{0.0, 0.2, 0.5, 1.0});
  const auto s = make_schedule(json{{"kind", "uniform"}, {"count", 2}, {"extra", {0.25, 0.5}}, {"store", {0.5}}}, 0.0, 1.0);
  CHECK(s == std::vector<double>{0.0, 0.25, 0.5, 1.0});
  const auto a = make_schedule(json{{"kind", "adaptive"}, {"first", 1e-3}, {"growth", 0.5}, {"max_step", 0.2}}, 0.0, 1.0);
  CHECK(a[0] == 0.0);
  CHECK(a[1] == 1e-3);
  CHECK(a.back() == 1.0);
  for (std::size_t i = 1; i < a.size(); ++i) {
    CHECK(a[i] > a[i - 1]);
    CHECK(a[i] - a[i - 1] <= 0.2 + 1e-15);
  }
  CHECK_THROWS_AS(make_schedule(json{{"kind", "random"}}, 0.0, 1.0), ConfigError);
}

TEST_CASE("config hash") {
  const auto dir = default_scenario_dir();
  const auto a = load_scenario(dir + "/uniform-torus.toml");
  const auto b = load_scenario(dir + "/uniform-torus.toml");
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  auto c = a;
  c.source["solver"]["epsilon"] = 2e-5;
  CHECK(config_hash(c) != config_hash(a));
}

TEST_CASE("csv export") {
  const auto run = sample_run();
  const auto text = records_csv(run);
  const auto ls = lines(text);
  REQUIRE(ls.size() == 4);
  CHECK(ls[0] == kCsvHeader);
  CHECK(ls[0] ==
        "time,mass,second_moment,entropy,rel_entropy,fisher,hhalf_sq,h1_power_sq,triple_term,h32_sq,linf,min_u,"
        "holder_13,holder_12_power,floor_activated");
  // full precision survives the text round trip
  std::vector<std::string> cols;
  std::stringstream row(ls[1]);
  for (std::string c; std::getline(row, c, ',');) cols.push_back(c);
  REQUIRE(cols.size() == 15);
  CHECK(std::stod(cols[5]) == 2.0 / 3.0);
  CHECK(std::stod(cols[10]) == run.records[0].linf);
  CHECK(std::stod(cols[11]) == -1e-300);
}

TEST_CASE("json and run-directory round trips") {
  const auto run = sample_run();
  CHECK(run_record_from_json(to_json(run)) == run);
  CHECK(run_record_from_json(nlohmann::json::parse(to_json(run).dump())) == run);

  const auto dir = scratch("roundtrip");
  write_run_dir(run, dir.string());
  CHECK(fs::exists(dir / "run.json"));
  CHECK(fs::exists(dir / "diagnostics.csv"));
  CHECK(fs::exists(dir / "verdicts.json"));
  CHECK(fs::file_size(dir / "fields" / "field_0000.bin") == 16 * sizeof(double));
  const auto side = nlohmann::json::parse(slurp(dir / "fields" / "field_0000.json"));
  CHECK(side["dtype"] == "float64");
  CHECK(side["x0"].get<double>() == -4.0);
  CHECK(read_run_dir(dir.string()) == run);

  // plot tables carry the same numbers as the csv
  const auto csv = lines(slurp(dir / "diagnostics.csv"));
  const auto ent = lines(slurp(dir / "plot" / "entropy.dat"));
  REQUIRE(ent.size() == csv.size());
  for (std::size_t i = 1; i < csv.size(); ++i) {
    std::stringstream row(csv[i]), pl(ent[i]);
    std::vector<std::string> cols;
    for (std::string c; std::getline(row, c, ',');) cols.push_back(c);
    double t = 0, e = 0;
    pl >> t >> e;
    CHECK(t == std::stod(cols[0]));
    CHECK(e == std::stod(cols[3]));
  }
  for (const char* f : {"hhalf.dat", "linf_scaled.dat", "max_deviation.dat", "holder.dat"}) CHECK(fs::exists(dir / "plot" / f));

  CHECK_THROWS_AS(read_run_dir((dir / "missing").string()), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("check registry") {
  const auto& reg = check_registry();
  CHECK(reg.size() == 12);
  for (int c = 1; c <= 12; ++c) {
    int hits = 0;
    for (const auto& s : reg) hits += s.criterion == c ? 1 : 0;
    CHECK(hits == 1);
  }
  CHECK(find_check("pv_crosscheck") != nullptr);
  CHECK(find_check("nope") == nullptr);
}

TEST_CASE("operators scenario passes and a zero tolerance surfaces a failure") {
  auto sc = load_scenario(default_scenario_dir() + "/operators.toml");
  ScenarioBank bank({sc});
  const auto run = run_scenario(sc);
  auto verdicts = evaluate_checks(sc, run, &bank);
  CHECK(verdicts.size() >= 2);
  for (const auto& v : verdicts) CHECK_MESSAGE(v.passed, format_verdict(v));

  sc.checks[0].params["tolerance"] = 0.0;
  verdicts = evaluate_checks(sc, run, &bank);
  bool any_failed = false;
  for (const auto& v : verdicts) any_failed = any_failed || (!v.passed && v.check == "operator_identities");
  CHECK(any_failed);
}

TEST_CASE("uniform torus scenario") {
  const auto sc = load_scenario(default_scenario_dir() + "/uniform-torus.toml");
  ScenarioBank bank({sc});
  const auto& run = bank.run(sc.name);
  CHECK_FALSE(run.failure.has_value());
  CHECK(run.records.size() == 11);
  CHECK(run.fields.size() == run.records.size());
  for (const auto& v : evaluate_checks(sc, run, &bank)) CHECK_MESSAGE(v.passed, format_verdict(v));
  // cached: the same object comes back
  CHECK(&bank.run(sc.name) == &run);
}

TEST_CASE("numerical failures become failing verdicts") {
  auto doc = toml::parse(R"(
name = "too-coarse"
suite = "line"
[domain]
kind = "line"
half_width = 8.0
n_points = 64
[initial]
mollifier_width = 0.01
components = [{ type = "atom", location = 0.0, weight = 1.0 }]
[solver]
epsilon = 0.0
t_end = 0.5
[[checks]]
name = "hhalf_monotone"
)");
  const auto sc = scenario_from_json(doc);
  CHECK_THROWS_AS(run_scenario(sc), NumericalError);
  ScenarioBank bank({sc});
  const auto& run = bank.run(sc.name);
  REQUIRE(run.failure.has_value());
  const auto verdicts = evaluate_checks(sc, run, &bank);
  REQUIRE(verdicts.size() == 1);
  CHECK_FALSE(verdicts[0].passed);
  CHECK(verdicts[0].aspect == "evaluation");
}

TEST_CASE("suite selection") {
  const auto all = load_scenario_dir(default_scenario_dir());
  CHECK(all.size() >= 9);
  const auto ops = select_suite(all, "operators");
  REQUIRE(ops.size() == 1);
  CHECK(ops[0].name == "operators");
  CHECK(select_suite(all, "full").size() == all.size());
  CHECK(select_suite(all, "").size() == all.size());
  CHECK_THROWS_AS(select_suite(all, "bogus"), ConfigError);

  std::ostringstream log;
  const auto res = verify("operators", "", default_scenario_dir(), log);
  CHECK(res.passed);
  const auto lines_ = summarize(res.verdicts);
  REQUIRE(lines_.size() == 2);
  CHECK(lines_[0].criterion == 1);
  CHECK(lines_[1].criterion == 2);
}

TEST_CASE("counter rng is reproducible") {
  CounterRng a(7), b(7), c(8);
  for (int i = 0; i < 5; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    CHECK(x != c.next());
  }
  CounterRng d(7, 3);
  CounterRng e(7);
  for (int i = 0; i < 3; ++i) e.next();
  CHECK(d.next() == e.next());
  double s = 0, s2 = 0;
  CounterRng g(1);
  for (int i = 0; i < 20000; ++i) {
    const double z = g.normal();
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / 20000) < 0.03);
  CHECK(s2 / 20000 == doctest::Approx(1.0).epsilon(0.03));
}
