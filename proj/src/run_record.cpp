#include "dyson/run_record.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dyson/errors.hpp"

namespace dyson {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

json record_json(const DiagnosticsRecord& r) {
  return json{{"time", r.time},
              {"mass", r.mass},
              {"second_moment", opt(r.second_moment)},
              {"entropy", r.entropy},
              {"rel_entropy", opt(r.rel_entropy)},
              {"fisher", r.fisher},
              {"hhalf_sq", r.hhalf_sq},
              {"h1_power_sq", r.h1_power_sq},
              {"triple_term", r.triple_term},
              {"h32_sq", r.h32_sq},
              {"linf", r.linf},
              {"min_u", r.min_u},
              {"holder_13", r.holder_13},
              {"holder_12_power", r.holder_12_power},
              {"floor_activated", r.floor_activated}};
}

DiagnosticsRecord record_from(const json& j) {
  DiagnosticsRecord r;
  r.time = j.at("time").get<double>();
  r.mass = j.at("mass").get<double>();
  r.second_moment = opt_from(j, "second_moment");
  r.entropy = j.at("entropy").get<double>();
  r.rel_entropy = opt_from(j, "rel_entropy");
  r.fisher = j.at("fisher").get<double>();
  r.hhalf_sq = j.at("hhalf_sq").get<double>();
  r.h1_power_sq = j.at("h1_power_sq").get<double>();
  r.triple_term = j.at("triple_term").get<double>();
  r.h32_sq = j.at("h32_sq").get<double>();
  r.linf = j.at("linf").get<double>();
  r.min_u = j.at("min_u").get<double>();
  r.holder_13 = j.at("holder_13").get<double>();
  r.holder_12_power = j.at("holder_12_power").get<double>();
  r.floor_activated = j.at("floor_activated").get<bool>();
  return r;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p)) throw ConfigError("cannot create output directory " + p.string());
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << text;
  if (!out) throw ConfigError("write failed for " + p.string());
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_f64le(const fs::path& p, const std::vector<double>& v) {
  std::string bytes(v.size() * 8, '\0');
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto bits = std::bit_cast<std::uint64_t>(v[i]);
    for (int b = 0; b < 8; ++b) bytes[i * 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xffu);
  }
  write_text(p, bytes);
}

std::vector<double> read_f64le(const fs::path& p) {
  const std::string bytes = read_text(p);
  if (bytes.size() % 8 != 0) throw ConfigError("corrupt field file " + p.string());
  std::vector<double> v(bytes.size() / 8);
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i * 8 + b])) << (8 * b);
    v[i] = std::bit_cast<double>(bits);
  }
  return v;
}

json base_json(const RunRecord& run) {
  json j;
  j["scenario"] = run.scenario;
  j["config_hash"] = run.config_hash;
  j["domain"] = {{"kind", run.domain_kind}, {"half_width", run.half_width}, {"n_points", run.n_points}};
  j["epsilon"] = run.epsilon;
  j["seed"] = run.seed;
  json recs = json::array();
  for (const auto& r : run.records) recs.push_back(record_json(r));
  j["records"] = std::move(recs);
  j["drift_hhalf_source"] = run.drift_hhalf_source;
  j["drift_entropy_source"] = run.drift_entropy_source;
  j["lemma_margin"] = run.lemma_margin;
  json power = json::array();
  for (const auto& p : run.power) {
    power.push_back({{"time", p.time}, {"h1_power_sq", p.h1_power_sq}, {"cross", p.cross}, {"viscous", p.viscous}});
  }
  j["power"] = std::move(power);
  json verdicts = json::array();
  for (const auto& v : run.verdicts) verdicts.push_back(to_json(v));
  j["verdicts"] = std::move(verdicts);
  j["runtime_seconds"] = run.runtime_seconds;
  j["failure"] = run.failure ? json(*run.failure) : json(nullptr);
  j["failure_time"] = opt(run.failure_time);
  return j;
}

}  // namespace

const char* const kCsvHeader =
    "time,mass,second_moment,entropy,rel_entropy,fisher,hhalf_sq,h1_power_sq,triple_term,h32_sq,"
    "linf,min_u,holder_13,holder_12_power,floor_activated";

Domain RunRecord::domain() const {
  return domain_kind == "torus" ? Domain::torus(n_points) : Domain::truncated_line(half_width, n_points);
}

const StoredField* RunRecord::field_at(double time, double tol) const {
  for (const auto& f : fields) {
    if (std::abs(f.time - time) <= tol) return &f;
  }
  return nullptr;
}

json to_json(const Verdict& v) {
  return json{{"check", v.check},     {"aspect", v.aspect},       {"criterion", v.criterion},
              {"scenario", v.scenario}, {"passed", v.passed},     {"measured", v.measured},
              {"tolerance", v.tolerance}, {"relation", v.relation}, {"detail", v.detail}};
}

Verdict verdict_from_json(const json& j) {
  Verdict v;
  v.check = j.at("check").get<std::string>();
  v.aspect = j.at("aspect").get<std::string>();
  v.criterion = j.at("criterion").get<int>();
  v.scenario = j.at("scenario").get<std::string>();
  v.passed = j.at("passed").get<bool>();
  // non-finite measurements serialize as null
  v.measured = j.at("measured").is_null() ? std::nan("") : j.at("measured").get<double>();
  v.tolerance = j.at("tolerance").is_null() ? std::nan("") : j.at("tolerance").get<double>();
  v.relation = j.at("relation").get<std::string>();
  v.detail = j.at("detail").get<std::string>();
  return v;
}

json to_json(const RunRecord& run) {
  json j = base_json(run);
  json fields = json::array();
  for (const auto& f : run.fields) fields.push_back({{"time", f.time}, {"values", f.values}});
  j["fields"] = std::move(fields);
  return j;
}

RunRecord run_record_from_json(const json& j) {
  RunRecord run;
  run.scenario = j.at("scenario").get<std::string>();
  run.config_hash = j.at("config_hash").get<std::string>();
  run.domain_kind = j.at("domain").at("kind").get<std::string>();
  run.half_width = j.at("domain").at("half_width").get<double>();
  run.n_points = j.at("domain").at("n_points").get<std::size_t>();
  run.epsilon = j.at("epsilon").get<double>();
  run.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& r : j.at("records")) run.records.push_back(record_from(r));
  run.drift_hhalf_source = j.at("drift_hhalf_source").get<std::vector<double>>();
  run.drift_entropy_source = j.at("drift_entropy_source").get<std::vector<double>>();
  run.lemma_margin = j.at("lemma_margin").get<std::vector<double>>();
  for (const auto& p : j.at("power")) {
    run.power.push_back({p.at("time").get<double>(), p.at("h1_power_sq").get<double>(),
                         p.at("cross").get<double>(), p.at("viscous").get<double>()});
  }
  for (const auto& v : j.at("verdicts")) run.verdicts.push_back(verdict_from_json(v));
  run.runtime_seconds = j.at("runtime_seconds").get<double>();
  if (!j.at("failure").is_null()) run.failure = j.at("failure").get<std::string>();
  run.failure_time = opt_from(j, "failure_time");
  if (j.contains("fields")) {
    for (const auto& f : j.at("fields")) {
      if (f.contains("values")) run.fields.push_back({f.at("time").get<double>(), f.at("values").get<std::vector<double>>()});
    }
  }
  return run;
}

std::string records_csv(const RunRecord& run) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : run.records) {
    out += fmt(r.time) + ',' + fmt(r.mass) + ',' + fmt(r.second_moment) + ',' + fmt(r.entropy) + ',' +
           fmt(r.rel_entropy) + ',' + fmt(r.fisher) + ',' + fmt(r.hhalf_sq) + ',' + fmt(r.h1_power_sq) + ',' +
           fmt(r.triple_term) + ',' + fmt(r.h32_sq) + ',' + fmt(r.linf) + ',' + fmt(r.min_u) + ',' +
           fmt(r.holder_13) + ',' + fmt(r.holder_12_power) + ',' + (r.floor_activated ? "1" : "0") + '\n';
  }
  return out;
}

void write_csv(const RunRecord& run, const std::string& dir) {
  ensure_dir(dir);
  write_text(fs::path(dir) / "diagnostics.csv", records_csv(run));
}

void write_json(const RunRecord& run, const std::string& dir) {
  ensure_dir(dir);
  const fs::path root(dir);
  json j = base_json(run);
  json fields = json::array();
  if (!run.fields.empty()) ensure_dir(root / "fields");
  for (std::size_t i = 0; i < run.fields.size(); ++i) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "field_%04zu", i);
    const fs::path bin = root / "fields" / (std::string(stem) + ".bin");
    write_f64le(bin, run.fields[i].values);
    json side = {{"file", std::string(stem) + ".bin"},
                 {"dtype", "float64"},
                 {"byte_order", "little"},
                 {"time", run.fields[i].time},
                 {"domain", {{"kind", run.domain_kind}, {"half_width", run.half_width}, {"n_points", run.n_points}}},
                 {"x0", run.domain_kind == "torus" ? 0.0 : -run.half_width},
                 {"dx", 2.0 * run.half_width / static_cast<double>(run.n_points)},
                 {"scenario", run.scenario},
                 {"config_hash", run.config_hash}};
    write_text(root / "fields" / (std::string(stem) + ".json"), side.dump(2) + "\n");
    fields.push_back({{"time", run.fields[i].time}, {"file", "fields/" + std::string(stem) + ".bin"}});
  }
  j["fields"] = std::move(fields);
  write_text(root / "run.json", j.dump(2) + "\n");
}

void write_plot_data(const RunRecord& run, const std::string& dir) {
  const fs::path root = fs::path(dir) / "plot";
  ensure_dir(root);
  const bool torus = run.domain_kind == "torus";
  auto table = [&](const char* file, const char* header, auto row) {
    std::string text = std::string("# ") + header + "\n";
    for (const auto& r : run.records) text += row(r) + "\n";
    write_text(root / file, text);
  };
  table("entropy.dat", "time entropy", [](const DiagnosticsRecord& r) { return fmt(r.time) + ' ' + fmt(r.entropy); });
  table("hhalf.dat", "time hhalf_sq", [](const DiagnosticsRecord& r) { return fmt(r.time) + ' ' + fmt(r.hhalf_sq); });
  table("linf_scaled.dat", "time linf sqrt(pi*t)*linf", [](const DiagnosticsRecord& r) {
    return fmt(r.time) + ' ' + fmt(r.linf) + ' ' + fmt(std::sqrt(std::numbers::pi * r.time) * r.linf);
  });
  table("max_deviation.dat", "time linf linf-uniform_level", [&](const DiagnosticsRecord& r) {
    const double level = torus ? 1.0 / (2.0 * std::numbers::pi) : 1.0 / (2.0 * run.half_width);
    return fmt(r.time) + ' ' + fmt(r.linf) + ' ' + fmt(r.linf - level);
  });
  table("holder.dat", "time holder_13", [](const DiagnosticsRecord& r) { return fmt(r.time) + ' ' + fmt(r.holder_13); });
}

void write_verdicts(const std::vector<Verdict>& verdicts, const std::string& path) {
  json arr = json::array();
  bool ok = true;
  for (const auto& v : verdicts) {
    arr.push_back(to_json(v));
    ok = ok && v.passed;
  }
  const fs::path p(path);
  if (p.has_parent_path()) ensure_dir(p.parent_path());
  write_text(p, json{{"passed", ok}, {"verdicts", arr}}.dump(2) + "\n");
}

void write_run_dir(const RunRecord& run, const std::string& dir) {
  write_json(run, dir);
  write_csv(run, dir);
  write_plot_data(run, dir);
  write_verdicts(run.verdicts, (fs::path(dir) / "verdicts.json").string());
}

RunRecord read_run_dir(const std::string& dir) {
  const fs::path root(dir);
  json j;
  try {
    j = json::parse(read_text(root / "run.json"));
  } catch (const json::exception& e) {
    throw ConfigError("malformed run.json in " + dir + ": " + e.what());
  }
  RunRecord run = run_record_from_json(j);
  run.fields.clear();
  for (const auto& f : j.at("fields")) {
    run.fields.push_back({f.at("time").get<double>(), read_f64le(root / f.at("file").get<std::string>())});
  }
  return run;
}

}  // namespace dyson
