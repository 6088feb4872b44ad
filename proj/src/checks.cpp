#include "dyson/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>

#include "dyson/diagnostics.hpp"
#include "dyson/errors.hpp"
#include "dyson/oracle.hpp"
#include "dyson/rng.hpp"
#include "dyson/spectral.hpp"

namespace dyson {
namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

double param(const json& p, const char* key, double fallback) {
  if (!p.contains(key)) return fallback;
  if (!p.at(key).is_number()) throw ConfigError(std::string("check parameter '") + key + "' must be a number");
  return p.at(key).get<double>();
}

std::string sparam(const json& p, const char* key, const std::string& fallback) {
  if (!p.contains(key)) return fallback;
  return p.at(key).get<std::string>();
}

std::string g17(double v) {
  std::ostringstream o;
  o.precision(6);
  o << v;
  return o.str();
}

class Builder {
 public:
  Builder(const CheckInput& in, const char* check, int criterion)
      : scenario_(in.scenario.name), check_(check), criterion_(criterion) {}

  // measured <= tol
  void at_most(const std::string& aspect, double measured, double tol, const std::string& detail = {}) {
    push(aspect, measured <= tol, measured, tol, "<=", detail);
  }
  void at_least(const std::string& aspect, double measured, double tol, const std::string& detail = {}) {
    push(aspect, measured >= tol, measured, tol, ">=", detail);
  }
  void push(const std::string& aspect, bool ok, double measured, double tol, const std::string& rel,
            const std::string& detail) {
    Verdict v;
    v.check = check_;
    v.aspect = aspect;
    v.criterion = criterion_;
    v.scenario = scenario_;
    v.passed = ok && !std::isnan(measured);
    v.measured = measured;
    v.tolerance = tol;
    v.relation = rel;
    v.detail = detail;
    out_.push_back(std::move(v));
  }
  std::vector<Verdict> take() { return std::move(out_); }

 private:
  std::string scenario_;
  std::string check_;
  int criterion_;
  std::vector<Verdict> out_;
};

double sup_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double l2(const Domain& d, std::span<const double> v) { return std::sqrt(spectral::sobolev_seminorm_sq(d, v, 0.0)); }

// Real trigonometric polynomial with random modes 1..band (plus `mean`).
std::vector<double> random_band_limited(const Domain& d, CounterRng& rng, std::size_t band, double mean,
                                        double decay) {
  spectral::HalfSpectrum c(d.size() / 2 + 1);
  c[0] = mean;
  for (std::size_t k = 1; k <= band; ++k) {
    const double scale = 0.5 / std::pow(static_cast<double>(k), decay);
    c[k] = {scale * rng.normal(), scale * rng.normal()};
  }
  return spectral::inverse(d, c);
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

std::vector<Verdict> operator_identities(const CheckInput& in) {
  Builder b(in, "operator_identities", 1);
  const auto t0 = std::chrono::steady_clock::now();
  const auto n = static_cast<std::size_t>(param(in.params, "n_points", 256));
  const auto trials = static_cast<int>(param(in.params, "trials", 100));
  const double tol = param(in.params, "tolerance", 1e-12);
  const double cotlar_tol = param(in.params, "cotlar_tolerance", 1e-10);
  const double max_seconds = param(in.params, "max_seconds", 5.0);
  const Domain d = Domain::torus(n);
  const std::size_t band = n / 3;
  CounterRng rng(in.scenario.seed);

  double hh = 0, anti = 0, iso = 0, dxh = 0, hdx = 0, cot = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const auto f = random_band_limited(d, rng, band, 0.0, 0.0);
    const auto g = random_band_limited(d, rng, band, 0.0, 0.0);
    const auto hf = spectral::hilbert_transform(d, f);
    const auto hg = spectral::hilbert_transform(d, g);
    const auto hhf = spectral::hilbert_transform(d, hf);
    std::vector<double> diff(n);
    for (std::size_t j = 0; j < n; ++j) diff[j] = hhf[j] + f[j];
    hh = std::max(hh, sup_abs(diff) / sup_abs(f));

    const double gf = spectral::integrate(d, std::vector<double>([&] {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j) p[j] = g[j] * hf[j] + f[j] * hg[j];
      return p;
    }()));
    anti = std::max(anti, std::abs(gf) / (l2(d, f) * l2(d, g)));
    iso = std::max(iso, std::abs(l2(d, hf) - l2(d, f)) / l2(d, f));

    const auto lam = spectral::fractional_laplacian(d, f, 1.0);
    const auto dh = spectral::derivative(d, hf);
    const auto hd = spectral::hilbert_transform(d, spectral::derivative(d, f));
    for (std::size_t j = 0; j < n; ++j) diff[j] = lam[j] - dh[j];
    dxh = std::max(dxh, sup_abs(diff) / sup_abs(lam));
    for (std::size_t j = 0; j < n; ++j) diff[j] = lam[j] - hd[j];
    hdx = std::max(hdx, sup_abs(diff) / sup_abs(lam));

    const auto hf2 = spectral::dealiased_product(d, hf, hf);
    const auto f2 = spectral::dealiased_product(d, f, f);
    const auto h_fhf = spectral::hilbert_transform(d, spectral::dealiased_product(d, f, hf));
    for (std::size_t j = 0; j < n; ++j) diff[j] = hf2[j] - f2[j] - 2.0 * h_fhf[j];
    const double fs = sup_abs(f);
    cot = std::max(cot, sup_abs(diff) / (fs * fs));
  }
  const std::string trials_note = std::to_string(trials) + " seeded trials, N = " + std::to_string(n);
  b.at_most("H∘H = -Id", hh, tol, trials_note);
  b.at_most("antisymmetry", anti, tol, "normalized by ‖f‖‖g‖; " + trials_note);
  b.at_most("isometry", iso, tol, trials_note);
  b.at_most("Λ = ∂ₓH", dxh, tol, trials_note);
  b.at_most("Λ = H∂ₓ", hdx, tol, trials_note);
  b.at_most("cotlar", cot, cotlar_tol, "band |k| <= N/3, dealiased products; " + trials_note);
  b.at_most("runtime_s", elapsed_since(t0), max_seconds);
  return b.take();
}

std::vector<Verdict> pv_crosscheck(const CheckInput& in) {
  Builder b(in, "pv_crosscheck", 2);
  const double a = param(in.params, "a", 0.5);
  const double half = param(in.params, "half_width", 16.0);
  const auto n = static_cast<std::size_t>(param(in.params, "n_points", 2048));
  const double tol = param(in.params, "tolerance", 1e-6);
  const Domain d = Domain::truncated_line(half, n);

  std::vector<double> p(n), q(n), pp(n), qp(n);
  for (std::size_t j = 0; j < n; ++j) {
    p[j] = oracle::poisson_kernel(a, d.x(j));
    q[j] = oracle::conjugate_poisson_kernel(a, d.x(j));
    pp[j] = oracle::periodic_poisson_kernel(a, half, d.x(j));
    qp[j] = oracle::periodic_conjugate_poisson_kernel(a, half, d.x(j));
  }
  const spectral::TailOptions quiet{spectral::TailPolicy::Ignore};
  const auto hs = spectral::hilbert_transform(d, p, quiet);
  const auto hq = oracle::hilbert_pv_quadrature(d, p, oracle::PvKernel::Periodic);
  std::vector<double> diff(n);
  for (std::size_t j = 0; j < n; ++j) diff[j] = hs[j] - hq[j];
  double vs_closed = 0.0;
  for (std::size_t j = 0; j < n; ++j) vs_closed = std::max(vs_closed, std::abs(hs[j] - q[j]));
  b.at_most("spectral vs pv quadrature", sup_abs(diff), tol,
            "alternating-point cotangent rule; spectral vs line-kernel closed form " + g17(vs_closed));

  const auto hp = spectral::hilbert_transform(d, pp, quiet);
  for (std::size_t j = 0; j < n; ++j) diff[j] = hp[j] - qp[j];
  b.at_most("periodized conjugate pair", sup_abs(diff), tol);
  return b.take();
}

double field_l1(const Domain& d, std::span<const double> u, std::span<const double> v) {
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) acc += std::abs(u[j] - v[j]);
  return acc * d.dx();
}

std::vector<Verdict> semicircle_selfsim(const CheckInput& in) {
  Builder b(in, "semicircle_selfsim", 3);
  const double t = param(in.params, "time", in.run.records.back().time);
  const auto* f = in.run.field_at(t);
  if (f == nullptr) throw ConfigError("semicircle_selfsim: no stored field at t = " + g17(t));
  const Domain d = in.run.domain();
  std::vector<double> exact(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) exact[j] = oracle::semicircle_density(t, d.x(j));
  const double rel = field_l1(d, f->values, exact) / spectral::integrate(d, exact);
  const double peak = *std::max_element(f->values.begin(), f->values.end());
  const double target = 1.0 / std::sqrt(kPi * t);
  b.at_most("relative L1 error", rel, param(in.params, "l1_tolerance", 2e-2));
  b.at_most("relative linf deviation", std::abs(peak - target) / target, param(in.params, "linf_tolerance", 0.02),
            "max u = " + g17(peak) + ", closed form " + g17(target) + ", min u = " +
                g17(*std::min_element(f->values.begin(), f->values.end())));
  b.at_most("runtime_s", in.run.runtime_seconds, param(in.params, "max_seconds", 60.0));
  return b.take();
}

std::vector<Verdict> linf_regularization(const CheckInput& in) {
  Builder b(in, "linf_regularization", 4);
  const double lo_t = param(in.params, "t_min", 0.5);
  const double hi_t = param(in.params, "t_max", 1.0);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::size_t count = 0;
  for (const auto& r : in.run.records) {
    if (r.time < lo_t - 1e-12 || r.time > hi_t + 1e-12) continue;
    const double s = std::sqrt(kPi * r.time) * r.linf;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
    ++count;
  }
  if (count == 0) throw ConfigError("linf_regularization: no records in the time window");
  const std::string note = std::to_string(count) + " records in [" + g17(lo_t) + ", " + g17(hi_t) + "]";
  b.at_least("min sqrt(pi t) linf", lo, param(in.params, "lower", 0.95), note);
  b.at_most("max sqrt(pi t) linf", hi, param(in.params, "upper", 1.05), note);
  return b.take();
}

std::string worst_interval(const std::vector<BalanceReport>& reps) {
  const auto it = std::max_element(reps.begin(), reps.end(), [](const auto& x, const auto& y) {
    return x.relative_residual < y.relative_residual;
  });
  if (it == reps.end()) return {};
  return "worst interval [" + g17(it->t1) + ", " + g17(it->t2) + "], " + std::to_string(reps.size()) + " intervals";
}

// Records (and the matching source samples) from `from_time` on. Runs started
// from a non-smooth datum have unbounded Fisher / Ḣ^{3/2} values at t_start, so
// the first trapezoid interval is meaningless there.
struct BalanceWindow {
  std::span<const DiagnosticsRecord> records;
  std::span<const double> source;
  std::string note;
};

BalanceWindow balance_window(const CheckInput& in, const std::vector<double>& source) {
  const auto& recs = in.run.records;
  std::size_t first = 0;
  std::string note;
  if (in.params.contains("from_time")) {
    const double from = param(in.params, "from_time", recs.front().time);
    while (first < recs.size() && recs[first].time < from - 1e-12 * std::max(1.0, std::abs(from))) ++first;
    if (recs.size() - first < 3) throw ConfigError("balance from_time leaves fewer than 3 records");
    note = "; balance from t = " + g17(recs[first].time);
  }
  std::span<const double> src;
  if (!source.empty()) src = std::span<const double>(source).subspan(first);
  return {std::span<const DiagnosticsRecord>(recs).subspan(first), src, note};
}

std::vector<Verdict> entropy_balance_check(const CheckInput& in) {
  Builder b(in, "entropy_balance", 5);
  const auto w = balance_window(in, in.run.drift_entropy_source);
  const auto reps = entropy_balance(w.records, in.run.epsilon, w.source);
  b.at_most("max relative residual", max_relative_residual(reps), param(in.params, "tolerance", 1e-2),
            worst_interval(reps) + (w.source.empty() ? "" : "; drift source included") + w.note);
  return b.take();
}

std::vector<Verdict> hhalf_balance_check(const CheckInput& in) {
  Builder b(in, "hhalf_balance", 6);
  const auto w = balance_window(in, in.run.drift_hhalf_source);
  const auto reps = hhalf_balance(w.records, in.run.epsilon, w.source);
  b.at_most("max relative residual", max_relative_residual(reps), param(in.params, "tolerance", 1e-2),
            worst_interval(reps) + (w.source.empty() ? "" : "; drift source included") + w.note);
  const double floor = param(in.params, "term_floor", -1e-10);
  double h1 = std::numeric_limits<double>::infinity(), tri = h1, h32 = h1;
  for (const auto& r : in.run.records) {
    h1 = std::min(h1, (2.0 / 9.0) * r.h1_power_sq);
    tri = std::min(tri, 0.5 * r.triple_term);
    h32 = std::min(h32, in.run.epsilon * r.h32_sq);
  }
  b.at_least("min (2/9)‖u^{3/2}‖²_{Ḣ¹}", h1, floor);
  b.at_least("min ½∫(Λu)²u", tri, floor);
  b.at_least("min ε‖u‖²_{Ḣ^{3/2}}", h32, floor);
  return b.take();
}

std::vector<Verdict> hhalf_monotone(const CheckInput& in) {
  Builder b(in, "hhalf_monotone", 7);
  if (in.scenario.solver && in.scenario.solver->drift.active()) {
    throw ConfigError("hhalf_monotone applies to runs without drift");
  }
  const double slack = param(in.params, "rel_slack", 1e-8);
  const auto m = hhalf_monotone_check(in.run.records, slack);
  b.at_most("largest increase", m.worst_increase, m.allowed,
            "slack " + g17(slack) + " × initial hhalf_sq " + g17(in.run.records.front().hhalf_sq));
  return b.take();
}

std::vector<Verdict> second_moment_slope(const CheckInput& in) {
  Builder b(in, "second_moment_slope", 8);
  const auto fit = second_moment_law(in.run.records, in.run.epsilon);
  b.at_most("relative slope deviation from 1/π + 2ε", std::abs(fit.deviation), param(in.params, "tolerance", 1e-2),
            "slope " + g17(fit.slope) + ", predicted " + g17(fit.predicted) + "; deviation from 1 + 2ε is " +
                g17(fit.alt_deviation));
  return b.take();
}

std::vector<Verdict> oracle_equivalence(const CheckInput& in) {
  Builder b(in, "oracle_equivalence", 9);
  if (!in.scenario.measure) throw ConfigError("oracle_equivalence needs a measure-valued initial condition");
  const double t = param(in.params, "time", 0.5);
  const auto* f = in.run.field_at(t);
  if (f == nullptr) throw ConfigError("oracle_equivalence: no stored field at t = " + g17(t));
  const Domain d = in.run.domain();
  const double elapsed_t = t - in.scenario.t_start;
  oracle::CharacteristicsOptions opt;
  if (in.params.contains("delta")) opt.delta = param(in.params, "delta", 0.0);
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = oracle::evolve_characteristics(*in.scenario.measure, elapsed_t, d.grid(), opt);
  const double oracle_seconds = elapsed_since(t0);
  const double l1 = field_l1(d, f->values, res.density);
  const double mass = spectral::integrate(d, res.density);
  b.at_most("L1 distance solver vs characteristics", l1, param(in.params, "tolerance", 3e-2),
            "delta " + g17(res.delta) + ", Newton fallbacks " + std::to_string(res.fallback_count));
  b.at_most("oracle point failures", static_cast<double>(res.failure_count), 0.0);
  b.at_most("max Im G at solved points", res.max_imag_g, 0.0);
  b.at_least("oracle mass", mass, 1.0 - param(in.params, "mass_window", 5e-3));
  b.at_most("oracle mass upper", mass, 1.0 + 1e-12);
  b.at_most("runtime_s", in.run.runtime_seconds + oracle_seconds, param(in.params, "max_seconds", 300.0),
            "solver " + g17(in.run.runtime_seconds) + " s over the whole run, oracle " + g17(oracle_seconds) + " s");
  return b.take();
}

double holder_cube_integral(const RunRecord& run, double lo, double hi) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < run.records.size(); ++i) {
    const auto& a = run.records[i];
    const auto& c = run.records[i + 1];
    if (a.time < lo - 1e-12 || c.time > hi + 1e-12) continue;
    acc += 0.5 * (c.time - a.time) * (std::pow(a.holder_13, 3) + std::pow(c.holder_13, 3));
  }
  return acc;
}

std::vector<Verdict> holder_control(const CheckInput& in) {
  Builder b(in, "holder_control", 10);
  const double lo = param(in.params, "t_min", 0.1);
  const double hi = param(in.params, "t_max", 1.0);
  const double here = holder_cube_integral(in.run, lo, hi);
  b.push("integral finite", std::isfinite(here) && here > 0.0, here, 0.0, "finite",
         "∫ holder_13³ dt over [" + g17(lo) + ", " + g17(hi) + "], N = " + std::to_string(in.run.n_points));

  const std::string companion = sparam(in.params, "companion", "");
  if (!companion.empty()) {
    if (in.bank == nullptr) throw ConfigError("holder_control: companion run unavailable");
    const RunRecord& other = in.bank->run(companion);
    if (other.failure) throw NumericalError("companion run failed: " + *other.failure, other.failure_time.value_or(0));
    const double there = holder_cube_integral(other, lo, hi);
    b.at_most("relative change under refinement", std::abs(here - there) / std::abs(there),
              param(in.params, "tolerance", 0.1),
              "N = " + std::to_string(in.run.n_points) + ": " + g17(here) + ", N = " +
                  std::to_string(other.n_points) + ": " + g17(there));
    if (!other.lemma_margin.empty()) {
      b.at_least("lemma margin (companion records)", *std::min_element(other.lemma_margin.begin(), other.lemma_margin.end()), 0.0);
    }
  }
  if (!in.run.lemma_margin.empty()) {
    b.at_least("lemma margin (records)", *std::min_element(in.run.lemma_margin.begin(), in.run.lemma_margin.end()), 0.0,
               std::to_string(in.run.lemma_margin.size()) + " sampled fields");
  }
  const Domain d = in.run.domain();
  const double tol_neg = in.scenario.solver ? in.scenario.solver->tol_neg : 1e-6;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& f : in.run.fields) {
    worst = std::min(worst, holder_lemma_check(DensityField{d, f.values, f.time}, tol_neg).margin);
  }
  if (!in.run.fields.empty()) b.at_least("lemma margin (stored fields)", worst, 0.0);
  return b.take();
}

std::vector<Verdict> periodic_longtime(const CheckInput& in) {
  Builder b(in, "periodic_longtime", 11);
  const Domain d = in.run.domain();
  if (!d.is_torus()) throw ConfigError("periodic_longtime needs a torus run");
  const double tol = param(in.params, "tolerance", 1e-3);
  const double level = d.uniform_level();
  const auto& recs = in.run.records;
  b.at_most("|M - 1/2π| at final time", std::abs(recs.back().linf - level), tol);

  std::size_t first_positive = recs.size();
  for (std::size_t i = recs.size(); i-- > 0;) {
    if (recs[i].min_u > 0.0) first_positive = i;
    else break;
  }
  const bool found = first_positive < recs.size();
  b.push("positivity from a finite time", found, found ? recs[first_positive].time : std::nan(""),
         recs.back().time, "t1 <=", found ? "min u > 0 for all records from t1 on" : "final record has min u <= 0");

  if (in.run.fields.empty()) throw ConfigError("periodic_longtime needs stored fields");
  const auto& last = in.run.fields.back();
  double dev = 0.0;
  for (double v : last.values) dev = std::max(dev, std::abs(v - level));
  b.at_most("sup |u - 1/2π| at final time", dev, tol, "t = " + g17(last.time));

  std::vector<double> eps_primes{0.01, 0.05, 0.1};
  if (in.params.contains("eps_primes")) eps_primes = in.params.at("eps_primes").get<std::vector<double>>();
  std::size_t checked = 0, failed = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& f : in.run.fields) {
    const DensityField u{d, f.values, f.time};
    for (double e : eps_primes) {
      const auto c = level_set_measure_check(u, e / (2.0 * kPi));
      ++checked;
      if (!c.holds) ++failed;
      worst = std::min(worst, c.bound - c.measure);
    }
  }
  b.at_most("level-set bound failures", static_cast<double>(failed), 0.0,
            std::to_string(checked) + " (field, ε') pairs over " + std::to_string(in.run.fields.size()) +
                " stored fields; smallest slack " + g17(worst));
  if (in.run.fields.size() != recs.size()) {
    b.push("level-set coverage", false, static_cast<double>(in.run.fields.size()), static_cast<double>(recs.size()),
           "==", "stored fields must cover every output time");
  }
  return b.take();
}

// Kato–Ponce trials are band-limited, so the same seed yields the same
// continuum fields at every resolution.
double kato_ponce_max(std::size_t n, std::uint64_t seed, int trials, std::size_t band) {
  const Domain d = Domain::torus(n);
  CounterRng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const auto u = random_band_limited(d, rng, band, d.uniform_level(), 1.0);
    const auto bv = random_band_limited(d, rng, band, rng.normal(), 1.0);
    worst = std::max(worst, kato_ponce_ratio(d, u, DriftSpec::sampled(d, bv)));
  }
  return worst;
}

std::vector<Verdict> drift_suite(const CheckInput& in) {
  Builder b(in, "drift_suite", 12);
  if (!in.scenario.solver || !in.scenario.solver->drift.active()) throw ConfigError("drift_suite needs a drift run");
  const auto& drift = in.scenario.solver->drift;
  const auto& recs = in.run.records;
  double xmax = 0.0;
  for (const auto& r : recs) xmax = std::max(xmax, r.hhalf_sq);
  const double slack = param(in.params, "gronwall_rel_slack", 1e-12) * xmax;
  const auto g = gronwall_envelope_check(recs, drift.lipschitz_bound, slack);
  b.at_most("Grönwall envelope failures", static_cast<double>(g.failures), 0.0,
            std::to_string(g.pairs) + " pairs, B = " + g17(drift.lipschitz_bound) + ", smallest slack " + g17(g.worst_slack));

  const auto reps = hhalf_balance(recs, in.run.epsilon, in.run.drift_hhalf_source);
  b.at_most("drift-corrected hhalf balance", max_relative_residual(reps), param(in.params, "tolerance", 1e-2),
            worst_interval(reps));

  const auto trials = static_cast<int>(param(in.params, "kp_trials", 100));
  const auto band = static_cast<std::size_t>(param(in.params, "kp_band", 16));
  const auto n1 = static_cast<std::size_t>(param(in.params, "kp_n_coarse", 256));
  const auto n2 = static_cast<std::size_t>(param(in.params, "kp_n_fine", 512));
  const double k1 = kato_ponce_max(n1, in.scenario.seed, trials, band);
  const double k2 = kato_ponce_max(n2, in.scenario.seed, trials, band);
  b.push("Kato–Ponce max ratio finite", std::isfinite(k1) && std::isfinite(k2), k2, 0.0, "finite",
         "max over " + std::to_string(trials) + " trials: N = " + std::to_string(n1) + ": " + g17(k1) + ", N = " +
             std::to_string(n2) + ": " + g17(k2));
  b.at_most("Kato–Ponce max relative change", std::abs(k2 - k1) / k1, param(in.params, "kp_stability", 0.1));
  return b.take();
}

}  // namespace

const std::vector<CheckSpec>& check_registry() {
  static const std::vector<CheckSpec> registry{
      {"operator_identities", 1, "H∘H, antisymmetry, isometry, Λ = ∂ₓH = H∂ₓ, Cotlar on random fields", false, operator_identities},
      {"pv_crosscheck", 2, "spectral Hilbert transform vs direct principal-value quadrature", false, pv_crosscheck},
      {"semicircle_selfsim", 3, "self-similar semicircle reproduced by the solver", true, semicircle_selfsim},
      {"linf_regularization", 4, "sqrt(pi t)·max u near 1 for a mollified atom", true, linf_regularization},
      {"entropy_balance", 5, "entropy identity with Fisher dissipation", true, entropy_balance_check},
      {"hhalf_balance", 6, "Ḣ^{1/2} identity and sign of its dissipation terms", true, hhalf_balance_check},
      {"hhalf_monotone", 7, "Ḣ^{1/2} seminorm non-increasing without drift", true, hhalf_monotone},
      {"second_moment_slope", 8, "linear growth of the second moment", true, second_moment_slope},
      {"oracle_equivalence", 9, "solver vs complex-Burgers characteristics", true, oracle_equivalence},
      {"holder_control", 10, "time-integrated C^{1/3} seminorm and the Hölder lemma", true, holder_control},
      {"periodic_longtime", 11, "convergence to the uniform density on the circle", true, periodic_longtime},
      {"drift_suite", 12, "Grönwall envelope, drift-corrected balance, Kato–Ponce ratio", true, drift_suite},
  };
  return registry;
}

const CheckSpec* find_check(const std::string& name) {
  for (const auto& c : check_registry()) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<Verdict> evaluate_checks(const Scenario& scenario, const RunRecord& run, RunBank* bank) {
  std::vector<Verdict> out;
  for (const auto& req : scenario.checks) {
    const CheckSpec* spec = find_check(req.name);
    if (spec == nullptr) throw ConfigError("unknown check '" + req.name + "'");
    auto fail = [&](const std::string& why) {
      Verdict v;
      v.check = spec->name;
      v.aspect = "evaluation";
      v.criterion = spec->criterion;
      v.scenario = scenario.name;
      v.passed = false;
      v.measured = std::nan("");
      v.tolerance = std::nan("");
      v.relation = "ok";
      v.detail = why;
      out.push_back(std::move(v));
    };
    if (spec->needs_run && run.failure) {
      fail("run failed: " + *run.failure);
      continue;
    }
    if (spec->needs_run && run.records.empty()) {
      fail("run produced no records");
      continue;
    }
    try {
      for (auto& v : spec->evaluate(CheckInput{scenario, run, req.params, bank})) out.push_back(std::move(v));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
  return out;
}

}  // namespace dyson
