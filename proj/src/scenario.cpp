#include "dyson/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "dyson/checks.hpp"
#include "dyson/errors.hpp"
#include "dyson/toml_lite.hpp"

namespace dyson {
namespace {

using nlohmann::json;

double num(const json& t, const char* key, double fallback) {
  if (!t.contains(key)) return fallback;
  const json& v = t.at(key);
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

double num_required(const json& t, const char* key, const std::string& where) {
  if (!t.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  return num(t, key, 0.0);
}

std::string str(const json& t, const char* key, const std::string& fallback) {
  if (!t.contains(key)) return fallback;
  if (!t.at(key).is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  return t.at(key).get<std::string>();
}

bool flag(const json& t, const char* key, bool fallback) {
  if (!t.contains(key)) return fallback;
  if (!t.at(key).is_boolean()) throw ConfigError(std::string("'") + key + "' must be a boolean");
  return t.at(key).get<bool>();
}

std::vector<double> num_list(const json& t, const char* key) {
  std::vector<double> out;
  if (!t.contains(key)) return out;
  if (!t.at(key).is_array()) throw ConfigError(std::string("'") + key + "' must be an array");
  for (const auto& v : t.at(key)) {
    if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

const json& table(const json& doc, const char* key) {
  static const json empty = json::object();
  if (!doc.contains(key)) return empty;
  if (!doc.at(key).is_object()) throw ConfigError(std::string("[") + key + "] must be a table");
  return doc.at(key);
}

Domain parse_domain(const json& t) {
  const std::string kind = str(t, "kind", "");
  const auto n = static_cast<std::size_t>(num_required(t, "n_points", "[domain]"));
  try {
    if (kind == "torus") return Domain::torus(n);
    if (kind == "line") return Domain::truncated_line(num_required(t, "half_width", "[domain]"), n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[domain]: ") + e.what());
  }
  throw ConfigError("[domain]: kind must be 'torus' or 'line'");
}

oracle::Component parse_component(const json& c) {
  const std::string type = str(c, "type", "");
  const double w = num(c, "weight", 1.0);
  if (type == "atom") return oracle::Atom{num(c, "location", 0.0), w};
  if (type == "uniform") return oracle::UniformPiece{num_required(c, "a", "uniform"), num_required(c, "b", "uniform"), w};
  if (type == "semicircle") {
    return oracle::Semicircle{num(c, "center", 0.0), num_required(c, "time", "semicircle"), w};
  }
  throw ConfigError("unknown initial component type '" + type + "'");
}

DriftSpec parse_drift(const json& t, const Domain& d) {
  const std::string kind = str(t, "kind", "none");
  if (kind == "none") return DriftSpec::none();
  if (kind == "sine" || kind == "cosine") {
    const double amp = num(t, "amplitude", 1.0);
    const double freq = num(t, "frequency", 1.0);
    std::vector<double> b(d.size()), db(d.size());
    for (std::size_t j = 0; j < d.size(); ++j) {
      const double arg = freq * d.x(j);
      b[j] = kind == "sine" ? amp * std::sin(arg) : amp * std::cos(arg);
      db[j] = kind == "sine" ? amp * freq * std::cos(arg) : -amp * freq * std::sin(arg);
    }
    std::optional<double> lip;
    if (t.contains("lipschitz_bound")) lip = num(t, "lipschitz_bound", 0.0);
    else lip = std::abs(amp * freq);
    return DriftSpec::sampled(std::move(b), std::move(db), lip);
  }
  throw ConfigError("[drift]: unknown kind '" + kind + "'");
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::vector<double> make_schedule(const json& t, double t_start, double t_end) {
  const std::string kind = str(t, "kind", "uniform");
  std::vector<double> out{t_start};
  if (kind == "list") {
    for (double v : num_list(t, "times")) {
      if (v > t_start) out.push_back(v);
    }
    out.push_back(t_end);
  } else if (kind == "uniform") {
    const auto count = static_cast<long>(num(t, "count", 100));
    if (count < 1) throw ConfigError("[schedule]: count must be >= 1");
    for (long i = 1; i <= count; ++i) {
      out.push_back(i == count ? t_end : t_start + (t_end - t_start) * static_cast<double>(i) / static_cast<double>(count));
    }
  } else if (kind == "adaptive") {
    // t_{n+1} = t_n + min(growth·t_n, max_step), starting with a tiny first step
    const double first = num(t, "first", 1e-6);
    const double growth = num(t, "growth", 0.03);
    const double max_step = num(t, "max_step", 0.005);
    if (!(first > 0 && growth > 0 && max_step > 0)) throw ConfigError("[schedule]: adaptive parameters must be positive");
    double tn = t_start + first;
    while (tn < t_end * (1.0 - 1e-12)) {
      out.push_back(tn);
      tn += std::max(std::min(growth * tn, max_step), first);
    }
    out.push_back(t_end);
  } else {
    throw ConfigError("[schedule]: unknown kind '" + kind + "'");
  }
  for (double v : num_list(t, "extra")) {
    if (v > t_start && v <= t_end) out.push_back(v);
  }
  for (double v : num_list(t, "store")) {
    if (v > t_start && v <= t_end) out.push_back(v);
  }
  for (double& v : out) v = std::min(v, t_end);
  std::sort(out.begin(), out.end());
  // merge times closer than roundoff
  out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("scenario must be a table");
  Scenario sc;
  sc.source = doc;
  sc.name = str(doc, "name", "");
  if (sc.name.empty()) throw ConfigError("scenario needs a name");
  sc.description = str(doc, "description", "");
  sc.suite = str(doc, "suite", "misc");
  sc.seed = static_cast<std::uint64_t>(num(doc, "seed", static_cast<double>(0x5eed)));

  // checks first: unknown names are rejected before anything else is built
  if (doc.contains("checks")) {
    if (!doc.at("checks").is_array()) throw ConfigError("'checks' must be an array of tables");
    for (const auto& c : doc.at("checks")) {
      CheckRequest req;
      req.name = str(c, "name", "");
      if (find_check(req.name) == nullptr) {
        throw ConfigError("scenario '" + sc.name + "': unknown check '" + req.name + "'");
      }
      req.params = c;
      req.params.erase("name");
      sc.checks.push_back(std::move(req));
    }
  }

  if (doc.contains("domain")) sc.domain = parse_domain(table(doc, "domain"));

  const json& init = table(doc, "initial");
  sc.mollifier_width = num(init, "mollifier_width", 0.0);
  if (init.contains("preset")) {
    sc.preset = InitialPreset{str(init, "preset", ""), num(init, "amplitude", 0.0)};
    if (sc.preset->kind != "uniform" && sc.preset->kind != "cosine") {
      throw ConfigError("[initial]: unknown preset '" + sc.preset->kind + "'");
    }
  } else if (init.contains("components")) {
    oracle::InitialMeasure m;
    m.poisson_width = sc.mollifier_width;
    for (const auto& c : init.at("components")) m.components.push_back(parse_component(c));
    try {
      m.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("[initial]: ") + e.what());
    }
    if (m.has_atoms() && !(sc.mollifier_width > 0.0)) {
      throw ConfigError("[initial]: atoms need mollifier_width > 0");
    }
    sc.measure = std::move(m);
  }

  if (doc.contains("solver")) {
    if (!sc.domain) throw ConfigError("[solver] requires a [domain]");
    if (!sc.measure && !sc.preset) throw ConfigError("[solver] requires [initial] data");
    const json& s = table(doc, "solver");
    SolverConfig cfg;
    cfg.epsilon = num(s, "epsilon", cfg.epsilon);
    cfg.cfl_number = num(s, "cfl", cfg.cfl_number);
    cfg.t_end = num_required(s, "t_end", "[solver]");
    cfg.dt_max = num(s, "dt_max", cfg.dt_max);
    cfg.tol_neg = num(s, "tol_neg", cfg.tol_neg);
    cfg.tol_mass = num(s, "tol_mass", cfg.tol_mass);
    cfg.dealias = flag(s, "dealias", cfg.dealias);
    sc.t_start = num(s, "t_start", 0.0);
    cfg.drift = parse_drift(table(doc, "drift"), *sc.domain);
    const json& sched = table(doc, "schedule");
    cfg.output_times = make_schedule(sched, sc.t_start, cfg.t_end);
    sc.store_times = num_list(sched, "store");
    sc.store_all = flag(sched, "store_all", false);
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("[solver]: ") + e.what());
    }
    sc.solver = std::move(cfg);
  }

  const json& diag = table(doc, "diagnostics");
  sc.holder = flag(diag, "holder", true);
  sc.lemma_check = flag(diag, "lemma_check", false);
  sc.power_terms = flag(diag, "power_terms", false);
  return sc;
}

Scenario load_scenario(const std::string& path) { return scenario_from_json(toml::parse_file(path)); }

std::vector<Scenario> load_scenario_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ConfigError("scenario directory not found: " + dir);
  std::vector<std::string> paths;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".toml") paths.push_back(e.path().string());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<Scenario> out;
  for (const auto& p : paths) out.push_back(load_scenario(p));
  std::sort(out.begin(), out.end(), [](const Scenario& a, const Scenario& b) { return a.name < b.name; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].name == out[i - 1].name) throw ConfigError("duplicate scenario name '" + out[i].name + "'");
  }
  return out;
}

std::string default_scenario_dir() {
  if (const char* env = std::getenv("DYSON_LAB_SCENARIO_DIR")) return env;
  return DYSON_LAB_SCENARIO_DIR;
}

std::string config_hash(const Scenario& scenario) {
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << fnv1a(scenario.source.dump());
  return out.str();
}

DensityField initial_density(const Scenario& sc) {
  if (!sc.domain) throw ConfigError("scenario '" + sc.name + "' has no domain");
  const Domain& d = *sc.domain;
  DensityField u{d, std::vector<double>(d.size()), sc.t_start};
  if (sc.preset) {
    const double level = d.uniform_level();
    for (std::size_t j = 0; j < d.size(); ++j) {
      const double wave = sc.preset->kind == "cosine" ? sc.preset->amplitude * std::cos(2.0 * std::numbers::pi * (d.x(j) - d.origin()) / d.circumference()) : 0.0;
      u.values[j] = level * (1.0 + wave);
    }
    return u;
  }
  if (!sc.measure) throw ConfigError("scenario '" + sc.name + "' has no initial data");
  DensityField s = oracle::sample_measure(*sc.measure, d);
  s.time = sc.t_start;
  return s;
}

}  // namespace dyson
