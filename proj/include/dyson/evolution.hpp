#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dyson/domain.hpp"

namespace dyson {

enum class DriftKind { None, Sampled };

/// Time-independent drift b(x) sampled on the solver grid.
struct DriftSpec {
  DriftKind kind = DriftKind::None;
  std::vector<double> b_values;
  std::vector<double> db_values;
  double lipschitz_bound = 0.0;

  static DriftSpec none() { return {}; }
  /// b sampled on the grid; ∂ₓb is computed spectrally. Without an explicit
  /// bound the Lipschitz constant is max|∂ₓb| on the grid.
  static DriftSpec sampled(const Domain& domain, std::vector<double> b,
                           std::optional<double> lipschitz = std::nullopt);
  static DriftSpec sampled(std::vector<double> b, std::vector<double> db,
                           std::optional<double> lipschitz = std::nullopt);

  bool active() const noexcept { return kind == DriftKind::Sampled; }
  void validate(std::size_t n_points) const;
};

struct SolverConfig {
  double epsilon = 1e-4;
  double cfl_number = 0.4;
  double t_end = 1.0;
  /// Absolute times at which states are emitted; empty means {t_end}.
  std::vector<double> output_times;
  bool dealias = true;
  double tol_neg = 1e-6;
  double tol_mass = 1e-10;
  /// Cap on the step when the advection speed vanishes.
  double dt_max = 0.05;
  /// When false, step() accepts any dt.
  bool enforce_dt_limit = true;
  DriftSpec drift;

  void validate() const;
};

struct State {
  double time = 0.0;
  DensityField u;
};

/// -∂ₓ(u(H[u] + b)) + ε∂ₓₓu. The zero mode of the result is exactly 0 in
/// spectral space.
std::vector<double> rhs(const DensityField& u, const DriftSpec& drift, double epsilon,
                        bool dealias = true);

/// One integrating-factor SSP-RK3 step. The exactly integrated linear part is
/// diffusion -εk² plus the linearization -ū|k| of the transport around the
/// mean density ū; the remainder is explicit.
State step(const State& state, double dt, const SolverConfig& config);

/// cfl·Δx / max(max|H[u] + b|, max|u - ū|, 1e-12), capped at dt_max.
double suggest_dt(const State& state, const SolverConfig& config);

using StateObserver = std::function<void(const State&)>;

/// Integrates from u0.time to config.t_end, landing exactly on each output
/// time. Returns the states at the output times, in order.
std::vector<State> run(const DensityField& u0, const SolverConfig& config,
                       const StateObserver& observer = {});

}  // namespace dyson
