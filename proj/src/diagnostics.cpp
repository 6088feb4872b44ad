#include "dyson/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dyson/spectral.hpp"

namespace dyson {
namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(std::span<const double> u) {
  for (double v : u) {
    if (!std::isfinite(v)) throw std::invalid_argument("diagnostics: non-finite field value");
  }
}

void require_ordered(std::span<const DiagnosticsRecord> records, std::size_t min_count) {
  if (records.size() < min_count) {
    throw std::invalid_argument("balance needs at least " + std::to_string(min_count) + " records");
  }
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (!(records[i].time > records[i - 1].time)) {
      throw std::invalid_argument("records are not strictly ordered in time");
    }
  }
}

// Generic per-interval balance: scale·Δq + ∫diss - ∫src.
template <class Q, class D>
std::vector<BalanceReport> balance(std::span<const DiagnosticsRecord> records, double scale,
                                   Q quantity, D dissipation, std::span<const double> source) {
  require_ordered(records, 3);
  if (!source.empty() && source.size() != records.size()) {
    throw std::invalid_argument("source series length differs from the record count");
  }
  std::vector<BalanceReport> out;
  double biggest = 0.0;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    const auto& a = records[i];
    const auto& b = records[i + 1];
    const double h = b.time - a.time;
    BalanceReport r;
    r.t1 = a.time;
    r.t2 = b.time;
    r.lhs_decrement = scale * (quantity(b) - quantity(a));
    r.dissipation_integral = 0.5 * h * (dissipation(a) + dissipation(b));
    r.source_integral = source.empty() ? 0.0 : 0.5 * h * (source[i] + source[i + 1]);
    r.residual = r.lhs_decrement + r.dissipation_integral - r.source_integral;
    biggest = std::max({biggest, std::abs(r.lhs_decrement), std::abs(r.dissipation_integral),
                        std::abs(r.source_integral)});
    out.push_back(r);
  }
  // Intervals where every term sits at roundoff relative to the run are not informative.
  const double floor = std::max(1e-12 * biggest, 1e-300);
  for (auto& r : out) {
    const double scale_terms = std::max({std::abs(r.lhs_decrement), std::abs(r.dissipation_integral),
                                         std::abs(r.source_integral), floor});
    r.relative_residual = std::abs(r.residual) / scale_terms;
  }
  return out;
}

std::vector<double> separations(std::size_t n, std::size_t budget, bool& exhaustive) {
  const std::size_t top = n / 2;
  std::vector<std::size_t> ms;
  exhaustive = n <= budget;
  if (exhaustive) {
    for (std::size_t m = 1; m <= top; ++m) ms.push_back(m);
  } else {
    const std::size_t dense = std::min<std::size_t>(256, top);
    for (std::size_t m = 1; m <= dense; ++m) ms.push_back(m);
    double g = static_cast<double>(dense);
    while (true) {
      g *= 1.01;
      const auto m = static_cast<std::size_t>(std::llround(g));
      if (m > top) break;
      if (m > ms.back()) ms.push_back(m);
    }
    if (ms.back() != top) ms.push_back(top);
  }
  return {ms.begin(), ms.end()};
}

std::vector<double> clipped(std::span<const double> u) {
  std::vector<double> out(u.begin(), u.end());
  for (double& v : out) v = std::max(v, 0.0);
  return out;
}

std::vector<double> power_three_halves(std::span<const double> u) {
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double v = std::max(u[i], 0.0);
    out[i] = v * std::sqrt(v);
  }
  return out;
}

}  // namespace

DiagnosticsRecord compute_record(const DensityField& u, const RecordOptions& options) {
  const Domain& d = u.domain;
  const auto& f = u.values;
  if (f.size() != d.size()) throw std::invalid_argument("compute_record: length mismatch");
  require_finite(f);

  DiagnosticsRecord r;
  r.time = u.time;
  r.mass = u.mass();
  r.linf = u.max_value();
  r.min_u = u.min_value();

  const double floor = options.entropy_floor;
  const std::vector<double> up = spectral::derivative(d, f);
  double ent = 0.0;
  double fis = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (f[j] < floor) r.floor_activated = true;
    const double g = std::max(f[j], floor);
    ent += f[j] * std::log(g);
    fis += up[j] * up[j] / g;
  }
  r.entropy = ent * d.dx();
  r.fisher = fis * d.dx();

  if (!d.is_torus()) {
    double m2 = 0.0;
    double cross = 0.0;
    const double log_norm = 0.5 * std::log(2.0 * kPi);
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double x = d.x(j);
      m2 += x * x * f[j];
      cross += f[j] * (0.5 * x * x + log_norm);
    }
    r.second_moment = m2 * d.dx();
    // ∫u log(u/γ) = ∫u log u + ∫u(x²/2 + ½log 2π)
    r.rel_entropy = r.entropy + cross * d.dx();
  }

  r.hhalf_sq = spectral::sobolev_seminorm_sq(d, f, 0.5);
  r.h32_sq = spectral::sobolev_seminorm_sq(d, f, 1.5);
  const std::vector<double> lam = spectral::fractional_laplacian(d, f, 1.0);
  r.triple_term = spectral::integrate_product(d, {lam, lam, f});
  r.h1_power_sq = 2.25 * spectral::integrate_product(d, {f, up, up});

  if (options.holder) {
    r.holder_13 = holder_seminorm(d, f, 1.0 / 3.0, options.holder_budget).value;
    r.holder_12_power = holder_seminorm(d, power_three_halves(f), 0.5, options.holder_budget).value;
  }
  return r;
}

HolderEstimate holder_seminorm(const Domain& domain, std::span<const double> u, double alpha,
                               std::size_t stride_budget) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("holder_seminorm: alpha must lie in (0, 1)");
  if (u.size() != domain.size()) throw std::invalid_argument("holder_seminorm: length mismatch");
  const std::size_t n = u.size();
  HolderEstimate est;
  const std::vector<double> ms = separations(n, stride_budget, est.exhaustive);
  est.separations = ms.size();
  est.scheme = est.exhaustive ? "exhaustive" : "dense<=256 + geometric(1.01)";
  for (double md : ms) {
    const auto m = static_cast<std::size_t>(md);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = i + m < n ? i + m : i + m - n;
      worst = std::max(worst, std::abs(u[i] - u[j]));
    }
    est.value = std::max(est.value, worst / std::pow(md * domain.dx(), alpha));
  }
  return est;
}

LemmaCheck holder_lemma_check(const DensityField& u, double tol_neg, std::size_t stride_budget) {
  if (u.min_value() < -tol_neg) {
    throw std::invalid_argument("holder_lemma_check: density below -tol_neg");
  }
  const std::vector<double> pos = clipped(u.values);
  LemmaCheck c;
  c.lhs = holder_seminorm(u.domain, pos, 1.0 / 3.0, stride_budget).value;
  c.rhs = std::pow(holder_seminorm(u.domain, power_three_halves(pos), 0.5, stride_budget).value,
                   2.0 / 3.0);
  c.margin = c.rhs - c.lhs;
  // pow/sqrt rounding only
  c.holds = c.lhs <= c.rhs * (1.0 + 1e-12) + 1e-300;
  return c;
}

std::vector<BalanceReport> entropy_balance(std::span<const DiagnosticsRecord> records,
                                           double epsilon, std::span<const double> source) {
  return balance(
      records, 1.0, [](const DiagnosticsRecord& r) { return r.entropy; },
      [epsilon](const DiagnosticsRecord& r) { return r.hhalf_sq + epsilon * r.fisher; }, source);
}

std::vector<BalanceReport> hhalf_balance(std::span<const DiagnosticsRecord> records,
                                         double epsilon, std::span<const double> source) {
  return balance(
      records, 0.5, [](const DiagnosticsRecord& r) { return r.hhalf_sq; },
      [epsilon](const DiagnosticsRecord& r) {
        return (2.0 / 9.0) * r.h1_power_sq + 0.5 * r.triple_term + epsilon * r.h32_sq;
      },
      source);
}

double max_relative_residual(std::span<const BalanceReport> reports) {
  double worst = 0.0;
  for (const auto& r : reports) worst = std::max(worst, r.relative_residual);
  return worst;
}

PowerTerms power_terms(const DensityField& u) {
  const Domain& d = u.domain;
  const auto& f = u.values;
  require_finite(f);
  const std::vector<double> up = spectral::derivative(d, f);
  const std::vector<double> upp = spectral::derivative(d, up);
  std::vector<double> neg_upp(upp.size());
  for (std::size_t j = 0; j < upp.size(); ++j) neg_upp[j] = -upp[j];
  const std::vector<double> lam = spectral::fractional_laplacian(d, f, 1.0);
  PowerTerms t;
  t.time = u.time;
  t.h1_power_sq = 2.25 * spectral::integrate_product(d, {f, up, up});
  t.cross = spectral::integrate_product(d, {lam, f, f, neg_upp});
  t.viscous = spectral::integrate_product(d, {f, upp, upp});
  return t;
}

PowerBalance power_balance(std::span<const PowerTerms> terms, double epsilon) {
  if (terms.size() < 3) throw std::invalid_argument("power_balance: stored fields missing");
  std::vector<DiagnosticsRecord> proxy(terms.size());
  std::vector<double> diss(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    proxy[i].time = terms[i].time;
    proxy[i].h1_power_sq = terms[i].h1_power_sq;
    diss[i] = 2.25 * (terms[i].cross + epsilon * terms[i].viscous);
  }
  // dissipation expressed as a negative source keeps one balance routine
  for (double& v : diss) v = -v;
  PowerBalance out;
  out.intervals = balance(
      std::span<const DiagnosticsRecord>(proxy), 0.5,
      [](const DiagnosticsRecord& r) { return r.h1_power_sq; },
      [](const DiagnosticsRecord&) { return 0.0; }, diss);
  for (auto& r : out.intervals) {
    r.dissipation_integral = -r.source_integral;
    r.source_integral = 0.0;
  }
  for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
    const double a = terms[i].cross;
    const double b = terms[i + 1].cross;
    out.cross_sign.push_back(a > 0 && b > 0 ? 1 : (a < 0 && b < 0 ? -1 : 0));
  }
  return out;
}

SecondMomentFit second_moment_law(std::span<const DiagnosticsRecord> records, double epsilon) {
  if (records.size() < 2) throw std::invalid_argument("second_moment_law: degenerate fit");
  double st = 0.0, sm = 0.0;
  for (const auto& r : records) {
    if (!r.second_moment) throw std::invalid_argument("second_moment_law: records lack m2 (torus run?)");
    st += r.time;
    sm += *r.second_moment;
  }
  const double n = static_cast<double>(records.size());
  const double tm = st / n;
  const double mm = sm / n;
  double stt = 0.0, stm = 0.0;
  for (const auto& r : records) {
    stt += (r.time - tm) * (r.time - tm);
    stm += (r.time - tm) * (*r.second_moment - mm);
  }
  if (!(stt > 0.0)) throw std::invalid_argument("second_moment_law: degenerate fit (zero time span)");
  SecondMomentFit fit;
  fit.slope = stm / stt;
  fit.intercept = mm - fit.slope * tm;
  fit.predicted = 1.0 / kPi + 2.0 * epsilon;
  fit.deviation = (fit.slope - fit.predicted) / fit.predicted;
  fit.alt_predicted = 1.0 + 2.0 * epsilon;
  fit.alt_deviation = (fit.slope - fit.alt_predicted) / fit.alt_predicted;
  return fit;
}

LevelSetCheck level_set_measure_check(const DensityField& u, double eps_prime) {
  if (!(eps_prime > 0.0)) throw std::invalid_argument("level_set_measure_check: eps' must be positive");
  if (!u.domain.is_torus()) throw std::invalid_argument("level_set_measure_check: torus density expected");
  const double level = u.domain.uniform_level();
  const double excess = std::max(u.max_value() - level, 0.0);
  std::size_t count = 0;
  for (double v : u.values) count += v < level - eps_prime ? 1 : 0;
  LevelSetCheck c;
  c.measure = static_cast<double>(count) * u.domain.dx();
  c.bound = u.domain.circumference() * excess / (eps_prime + excess);
  // the grid version of the bound is exact; allow roundoff in the mass
  c.holds = c.measure <= c.bound + 1e-10 * u.domain.circumference();
  return c;
}

GronwallCheck gronwall_envelope_check(std::span<const DiagnosticsRecord> records,
                                      std::optional<double> lipschitz_bound, double slack) {
  if (!lipschitz_bound) throw std::invalid_argument("gronwall_envelope_check: Lipschitz bound missing");
  const double b = *lipschitz_bound;
  if (!(b >= 0.0)) throw std::invalid_argument("gronwall_envelope_check: bound must be >= 0");
  GronwallCheck c;
  c.worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (std::size_t j = i; j < records.size(); ++j) {
      const double h = records[j].time - records[i].time;
      const double env = (records[i].hhalf_sq + 0.5 * b) * std::exp(4.0 * b * h) - 0.5 * b;
      const double s = env - records[j].hhalf_sq;
      ++c.pairs;
      c.worst_slack = std::min(c.worst_slack, s);
      if (s < -slack) {
        ++c.failures;
        c.holds = false;
      }
    }
  }
  if (c.pairs == 0) c.worst_slack = 0.0;
  return c;
}

MonotoneCheck hhalf_monotone_check(std::span<const DiagnosticsRecord> records, double rel_slack) {
  MonotoneCheck c;
  if (records.empty()) return c;
  c.allowed = rel_slack * records.front().hhalf_sq;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const double inc = records[i].hhalf_sq - records[i - 1].hhalf_sq;
    c.worst_increase = std::max(c.worst_increase, inc);
  }
  c.holds = c.worst_increase <= c.allowed;
  return c;
}

double kato_ponce_ratio(const Domain& domain, std::span<const double> u, const DriftSpec& drift) {
  if (!drift.active()) throw std::invalid_argument("kato_ponce_ratio: drift samples required");
  drift.validate(domain.size());
  const double hh = spectral::sobolev_seminorm_sq(domain, u, 0.5);
  if (!(hh > 0.0)) throw std::invalid_argument("kato_ponce_ratio: u has zero Hhalf seminorm");
  if (drift.lipschitz_bound == 0.0) return 0.0;
  const std::vector<double> up = spectral::derivative(domain, u);
  const std::vector<double> bup = spectral::dealiased_product(domain, drift.b_values, up);
  const std::vector<double> a = spectral::fractional_laplacian(domain, bup, 0.5);
  const std::vector<double> qup = spectral::fractional_laplacian(domain, up, 0.5);
  const std::vector<double> bq = spectral::dealiased_product(domain, drift.b_values, qup);
  std::vector<double> comm(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) comm[j] = a[j] - bq[j];
  const double norm = std::sqrt(spectral::sobolev_seminorm_sq(domain, comm, 0.0));
  return norm / (drift.lipschitz_bound * std::sqrt(hh));
}

double drift_hhalf_source(const DensityField& u, const DriftSpec& drift) {
  if (!drift.active()) return 0.0;
  const Domain& d = u.domain;
  const std::vector<double> flux = spectral::derivative(d, spectral::dealiased_product(d, u.values, drift.b_values));
  const std::vector<double> lam = spectral::fractional_laplacian(d, u.values, 1.0);
  double acc = 0.0;
  for (std::size_t j = 0; j < flux.size(); ++j) acc += flux[j] * lam[j];
  return -acc * d.dx();
}

double drift_entropy_source(const DensityField& u, const DriftSpec& drift) {
  if (!drift.active()) return 0.0;
  return -spectral::integrate_product(u.domain, {u.values, drift.db_values});
}

}  // namespace dyson
