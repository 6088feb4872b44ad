#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dyson/domain.hpp"
#include "dyson/evolution.hpp"

namespace dyson {

/// One time-stamped row of monitored functionals. Line-only quantities are
/// empty on the torus.
struct DiagnosticsRecord {
  double time = 0.0;
  double mass = 0.0;
  std::optional<double> second_moment;
  double entropy = 0.0;
  std::optional<double> rel_entropy;
  double fisher = 0.0;
  double hhalf_sq = 0.0;
  double h1_power_sq = 0.0;
  double triple_term = 0.0;
  double h32_sq = 0.0;
  double linf = 0.0;
  double min_u = 0.0;
  double holder_13 = 0.0;
  double holder_12_power = 0.0;
  bool floor_activated = false;

  bool operator==(const DiagnosticsRecord&) const = default;
};

struct RecordOptions {
  double entropy_floor = 1e-14;
  bool holder = true;
  std::size_t holder_budget = 4096;
};

DiagnosticsRecord compute_record(const DensityField& u, const RecordOptions& options = {});

struct HolderEstimate {
  double value = 0.0;
  bool exhaustive = true;
  std::size_t separations = 0;  // number of grid separations examined
  std::string scheme;
};

/// max over sampled pairs of |u_i - u_j| / d(x_i, x_j)^α, periodic distance.
/// All separations when N <= stride_budget; otherwise every separation up to
/// 256 cells plus a geometric ladder (ratio 1.01) up to N/2.
HolderEstimate holder_seminorm(const Domain& domain, std::span<const double> u, double alpha,
                               std::size_t stride_budget = 4096);

struct LemmaCheck {
  bool holds = false;
  double lhs = 0.0;  // [u]_{1/3}
  double rhs = 0.0;  // [u^{3/2}]_{1/2}^{2/3}
  double margin = 0.0;
};

/// [u]_{C^{1/3}} <= [u^{3/2}]_{C^{1/2}}^{2/3} with constant 1, on the
/// nonnegative part of u.
LemmaCheck holder_lemma_check(const DensityField& u, double tol_neg = 1e-6,
                              std::size_t stride_budget = 4096);

struct BalanceReport {
  double t1 = 0.0;
  double t2 = 0.0;
  double lhs_decrement = 0.0;
  double dissipation_integral = 0.0;
  double source_integral = 0.0;
  double residual = 0.0;
  double relative_residual = 0.0;
};

/// Per interval: [E(t2) - E(t1)] + ∫(hhalf_sq + ε·fisher) - ∫source, trapezoid
/// in time. `source` (one value per record) holds extra forcing such as drift.
std::vector<BalanceReport> entropy_balance(std::span<const DiagnosticsRecord> records,
                                           double epsilon, std::span<const double> source = {});

/// Per interval: ½Δhhalf_sq + ∫[(2/9)h1_power_sq + ½triple_term + ε·h32_sq] - ∫source.
std::vector<BalanceReport> hhalf_balance(std::span<const DiagnosticsRecord> records,
                                         double epsilon, std::span<const double> source = {});

double max_relative_residual(std::span<const BalanceReport> reports);

/// Quantities of the power balance evaluated on a stored field.
struct PowerTerms {
  double time = 0.0;
  double h1_power_sq = 0.0;  // ∫|∂ₓ(u^{3/2})|² = (9/4)∫u(∂ₓu)²
  double cross = 0.0;        // ∫(-Δ)^{1/2}u · u² · (-∂ₓₓu)
  double viscous = 0.0;      // ∫u(∂ₓₓu)²

  bool operator==(const PowerTerms&) const = default;
};

PowerTerms power_terms(const DensityField& u);

struct PowerBalance {
  std::vector<BalanceReport> intervals;
  /// Per interval: +1 if the cross term is positive at both ends, -1 if
  /// negative at both, 0 otherwise.
  std::vector<int> cross_sign;
};

/// ½Δh1_power_sq + ∫(9/4)(cross + ε·viscous) per interval.
PowerBalance power_balance(std::span<const PowerTerms> terms, double epsilon);

struct SecondMomentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double predicted = 0.0;        // 1/π + 2ε
  double deviation = 0.0;        // (slope - predicted) / predicted
  double alt_predicted = 0.0;  // 1 + 2ε, the slope without the 1/π in H
  double alt_deviation = 0.0;
};

SecondMomentFit second_moment_law(std::span<const DiagnosticsRecord> records, double epsilon);

struct LevelSetCheck {
  bool holds = false;
  double measure = 0.0;
  double bound = 0.0;
};

/// leb{u < 1/(2π) - ε'} <= 2π(M - 1/(2π)) / (ε' + M - 1/(2π)), M = max u.
LevelSetCheck level_set_measure_check(const DensityField& u, double eps_prime);

struct GronwallCheck {
  bool holds = true;
  std::size_t pairs = 0;
  std::size_t failures = 0;
  double worst_slack = 0.0;  // min over pairs of envelope - value
};

/// X(h) <= (X(t) + B/2)e^{4B(h-t)} - B/2 for all recorded t <= h, X = hhalf_sq.
/// `slack` absorbs roundoff.
GronwallCheck gronwall_envelope_check(std::span<const DiagnosticsRecord> records,
                                      std::optional<double> lipschitz_bound, double slack = 0.0);

struct MonotoneCheck {
  bool holds = true;
  double worst_increase = 0.0;
  double allowed = 0.0;
};

/// hhalf_sq non-increasing up to rel_slack · first value.
MonotoneCheck hhalf_monotone_check(std::span<const DiagnosticsRecord> records,
                                   double rel_slack = 1e-8);

/// ‖[(-Δ)^{1/4}, b]∂ₓu‖ / (‖∂ₓb‖_∞ ‖u‖_{Ḣ^{1/2}}); zero when the Lipschitz bound is zero.
double kato_ponce_ratio(const Domain& domain, std::span<const double> u, const DriftSpec& drift);

/// Drift forcing of ½d/dt hhalf_sq: -∫∂ₓ(ub)·(-Δ)^{1/2}u.
double drift_hhalf_source(const DensityField& u, const DriftSpec& drift);

/// Drift forcing of d/dt ∫u log u: -∫u·∂ₓb.
double drift_entropy_source(const DensityField& u, const DriftSpec& drift);

}  // namespace dyson
