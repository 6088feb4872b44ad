#include "dyson/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "dyson/errors.hpp"
#include "dyson/spectral.hpp"
#include "fft.hpp"

namespace dyson {
namespace {

using cplx = std::complex<double>;
using spectral::HalfSpectrum;

// Spectral transport term -ik·P(u - ubar, H[u] + b) - ubar·ik·b̂, zero and
// Nyquist modes cleared.
HalfSpectrum transport_hat(const Domain& d, const HalfSpectrum& uh, double ubar,
                           const HalfSpectrum* bh, bool dealias) {
  const std::size_t n = d.size();
  const std::size_t half = n / 2;
  const std::size_t m = dealias ? 3 * n / 2 : n;

  HalfSpectrum wh(m / 2 + 1, cplx{});
  HalfSpectrum vh(m / 2 + 1, cplx{});
  for (std::size_t k = 0; k < half; ++k) {
    wh[k] = uh[k];
    vh[k] = k == 0 ? cplx{} : cplx{uh[k].imag(), -uh[k].real()};
    if (bh != nullptr) vh[k] += (*bh)[k];
  }
  wh[0] -= ubar;

  auto& fft = detail::real_fft(m);
  std::vector<double> w(m), v(m);
  fft.inverse(wh, w);
  fft.inverse(vh, v);
  for (std::size_t j = 0; j < m; ++j) w[j] *= v[j];
  HalfSpectrum ph(m / 2 + 1);
  fft.forward(w, ph);

  HalfSpectrum out(half + 1, cplx{});
  for (std::size_t k = 1; k < half; ++k) {
    const double kk = d.wavenumber(static_cast<std::ptrdiff_t>(k));
    cplx flux = ph[k];
    if (bh != nullptr) flux += ubar * (*bh)[k];
    out[k] = cplx{0.0, -kk} * flux;
  }
  return out;
}

std::optional<HalfSpectrum> drift_hat(const Domain& d, const DriftSpec& drift) {
  if (!drift.active()) return std::nullopt;
  drift.validate(d.size());
  return spectral::forward(d, drift.b_values);
}

void check_finite(std::span<const double> u, double time) {
  for (double v : u) {
    if (!std::isfinite(v)) throw BlowUpError("non-finite density at t = " + std::to_string(time), time);
  }
}

}  // namespace

DriftSpec DriftSpec::sampled(const Domain& domain, std::vector<double> b,
                             std::optional<double> lipschitz) {
  std::vector<double> db = spectral::derivative(domain, b);
  return sampled(std::move(b), std::move(db), lipschitz);
}

DriftSpec DriftSpec::sampled(std::vector<double> b, std::vector<double> db,
                             std::optional<double> lipschitz) {
  DriftSpec out;
  out.kind = DriftKind::Sampled;
  double sup = 0.0;
  for (double v : db) sup = std::max(sup, std::abs(v));
  out.lipschitz_bound = lipschitz.value_or(sup);
  out.b_values = std::move(b);
  out.db_values = std::move(db);
  return out;
}

void DriftSpec::validate(std::size_t n_points) const {
  if (!active()) return;
  if (b_values.size() != n_points || db_values.size() != n_points) {
    throw std::invalid_argument("drift samples do not match the grid size");
  }
  if (!(lipschitz_bound >= 0.0)) throw std::invalid_argument("drift Lipschitz bound must be >= 0");
  for (double v : db_values) {
    if (std::abs(v) > lipschitz_bound + 1e-12) {
      throw std::invalid_argument("max|db| exceeds the stated Lipschitz bound");
    }
  }
}

void SolverConfig::validate() const {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
  if (!(cfl_number > 0.0 && cfl_number <= 1.0)) throw std::invalid_argument("cfl_number must lie in (0, 1]");
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
  if (!(dt_max > 0.0)) throw std::invalid_argument("dt_max must be positive");
  if (!(tol_neg >= 0.0) || !(tol_mass >= 0.0)) throw std::invalid_argument("tolerances must be >= 0");
  if (!std::is_sorted(output_times.begin(), output_times.end())) {
    throw std::invalid_argument("output_times must be sorted");
  }
  for (double t : output_times) {
    if (t < 0.0 || t > t_end) throw std::invalid_argument("output time outside [0, t_end]");
  }
}

std::vector<double> rhs(const DensityField& u, const DriftSpec& drift, double epsilon,
                        bool dealias) {
  const Domain& d = u.domain;
  check_finite(u.values, u.time);
  const HalfSpectrum uh = spectral::forward(d, u.values);
  const auto bh = drift_hat(d, drift);
  HalfSpectrum out = transport_hat(d, uh, 0.0, bh ? &*bh : nullptr, dealias);
  for (std::size_t k = 1; k <= d.size() / 2; ++k) {
    const double kk = d.wavenumber(static_cast<std::ptrdiff_t>(k));
    out[k] -= epsilon * kk * kk * uh[k];
  }
  out[0] = 0.0;
  return spectral::inverse(d, out);
}

double suggest_dt(const State& state, const SolverConfig& config) {
  const Domain& d = state.u.domain;
  std::vector<double> v = spectral::hilbert_transform(d, state.u.values, {spectral::TailPolicy::Ignore});
  if (config.drift.active()) {
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += config.drift.b_values[j];
  }
  double speed = 1e-12;
  for (double x : v) speed = std::max(speed, std::abs(x));
  const double ubar = state.u.mass() / d.circumference();
  for (double x : state.u.values) speed = std::max(speed, std::abs(x - ubar));
  return std::min(config.cfl_number * d.dx() / speed, config.dt_max);
}

State step(const State& state, double dt, const SolverConfig& config) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  if (config.enforce_dt_limit) {
    const double limit = suggest_dt(state, config);
    if (dt > limit * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "step: dt = " << dt << " exceeds the stability limit " << limit;
      throw std::invalid_argument(msg.str());
    }
  }
  const Domain& d = state.u.domain;
  const std::size_t half = d.size() / 2;
  const auto bh = drift_hat(d, config.drift);
  const HalfSpectrum* bp = bh ? &*bh : nullptr;

  const HalfSpectrum u0 = spectral::forward(d, state.u.values);
  const double ubar = u0[0].real();

  std::vector<double> rate(half + 1);
  for (std::size_t k = 0; k <= half; ++k) {
    const double kk = d.wavenumber(static_cast<std::ptrdiff_t>(k));
    rate[k] = -config.epsilon * kk * kk - (k == half ? 0.0 : ubar * kk);
  }
  auto ef = [&](std::size_t k, double tau) { return std::exp(rate[k] * tau); };

  HalfSpectrum n0 = transport_hat(d, u0, ubar, bp, config.dealias);
  HalfSpectrum u1(half + 1);
  for (std::size_t k = 0; k <= half; ++k) u1[k] = ef(k, dt) * (u0[k] + dt * n0[k]);

  HalfSpectrum n1 = transport_hat(d, u1, ubar, bp, config.dealias);
  HalfSpectrum u2(half + 1);
  for (std::size_t k = 0; k <= half; ++k) {
    u2[k] = 0.75 * ef(k, dt / 2) * u0[k] + 0.25 * ef(k, -dt / 2) * (u1[k] + dt * n1[k]);
  }

  HalfSpectrum n2 = transport_hat(d, u2, ubar, bp, config.dealias);
  HalfSpectrum u3(half + 1);
  for (std::size_t k = 0; k <= half; ++k) {
    u3[k] = ef(k, dt) * u0[k] / 3.0 + (2.0 / 3.0) * ef(k, dt / 2) * (u2[k] + dt * n2[k]);
  }
  u3[0] = u0[0];

  State out{state.time + dt, DensityField{d, spectral::inverse(d, u3), state.time + dt}};
  check_finite(out.u.values, out.time);
  const double lo = out.u.min_value();
  if (lo < -config.tol_neg) {
    std::ostringstream msg;
    msg << "density undershoot " << lo << " below -tol_neg = " << -config.tol_neg
        << " at t = " << out.time << "; grid does not resolve the solution";
    throw ResolutionError(msg.str(), out.time, lo);
  }
  return out;
}

std::vector<State> run(const DensityField& u0, const SolverConfig& config,
                       const StateObserver& observer) {
  config.validate();
  config.drift.validate(u0.domain.size());
  check_finite(u0.values, u0.time);
  u0.validate(config.tol_neg, config.tol_mass);

  std::vector<double> schedule = config.output_times;
  if (schedule.empty()) schedule.push_back(config.t_end);

  SolverConfig relaxed = config;
  relaxed.enforce_dt_limit = false;
  State state{u0.time, u0};
  std::vector<State> out;
  if (config.t_end <= u0.time) {
    out.push_back(state);
    if (observer) observer(state);
    return out;
  }
  for (double target : schedule) {
    if (target < u0.time) throw std::invalid_argument("output time precedes the initial time");
    while (state.time < target) {
      double dt = suggest_dt(state, config);
      const double remaining = target - state.time;
      const bool lands = dt >= remaining * (1.0 - 1e-12);
      if (lands) dt = remaining;
      state = step(state, dt, relaxed);
      if (lands) state.time = state.u.time = target;
    }
    out.push_back(state);
    if (observer) observer(state);
  }
  return out;
}

}  // namespace dyson
