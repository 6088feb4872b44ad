#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "dyson/errors.hpp"
#include "dyson/evolution.hpp"
#include "dyson/oracle.hpp"
#include "dyson/spectral.hpp"

using namespace dyson;
constexpr double pi = std::numbers::pi;

namespace {

DensityField field(const Domain& d, auto fn, double t = 0.0) {
  DensityField u{d, std::vector<double>(d.size()), t};
  for (std::size_t j = 0; j < d.size(); ++j) u.values[j] = fn(d.x(j));
  return u;
}

void normalize(DensityField& u) {
  const double m = u.mass();
  for (auto& v : u.values) v /= m;
}

DensityField cosine(std::size_t n, double amp, int k = 1) {
  return field(Domain::torus(n), [=](double x) { return (1.0 + amp * std::cos(k * x)) / (2 * pi); });
}

double sup(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("rhs of simple states") {
  const auto u = cosine(64, 0.0);
  CHECK(sup(rhs(u, DriftSpec::none(), 1e-3)) < 1e-16);

  // uniform density carried by b = sin θ: ∂ₜu = -∂ₓ(u b) = -cos θ / 2π
  const auto d = u.domain;
  std::vector<double> b(64);
  for (std::size_t j = 0; j < 64; ++j) b[j] = std::sin(d.x(j));
  const auto r = rhs(u, DriftSpec::sampled(d, b, 1.0), 0.0);
  double err = 0.0;
  for (std::size_t j = 0; j < 64; ++j) err = std::max(err, std::abs(r[j] + std::cos(d.x(j)) / (2 * pi)));
  CHECK(err < 1e-14);

  // mass is conserved exactly by the right-hand side
  const auto v = field(Domain::truncated_line(4.0, 256), [](double x) { return std::exp(-x * x) / std::sqrt(pi); });
  const auto rv = rhs(v, DriftSpec::none(), 1e-2);
  CHECK(std::abs(spectral::to_spectral(v.domain, rv)[0]) < 1e-16);
}

TEST_CASE("rhs of the semicircle matches the time derivative of the closed form") {
  // Weak form against bumps inside the support: the √ edge makes pointwise values ring.
  // The periodic kernel adds -πx/(12L²) to Hu, i.e. +(π/(12L²))∂ₓ(xu) to the rhs;
  // the next image term (~1e-4) is left in the tolerance.
  const double L = 4.0, h = 1e-5;
  for (std::size_t n : {1024u, 8192u}) {
    const auto d = Domain::truncated_line(L, n);
    const auto u = field(d, [](double x) { return oracle::semicircle_density(1.0, x); }, 1.0);
    const auto r = rhs(u, DriftSpec::none(), 0.0);
    for (double c : {0.0, 0.3, -0.4}) {
      double lhs = 0.0, ref = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double x = d.x(j), phi = std::exp(-(x - c) * (x - c) / 0.05);
        const double dt = (oracle::semicircle_density(1 + h, x) - oracle::semicircle_density(1 - h, x)) / (2 * h);
        const double rho = oracle::semicircle_density(1.0, x);
        const double image = rho > 0 ? pi / (12 * L * L) * (rho - x * x / (4 * rho)) : 0.0;
        lhs += r[j] * phi * d.dx();
        ref += (dt + image) * phi * d.dx();
      }
      CHECK(std::abs(lhs - ref) < 2e-4);
    }
  }
}

TEST_CASE("uniform state is stationary") {
  const auto u = cosine(128, 0.0);
  SolverConfig cfg;
  cfg.epsilon = 1e-3;
  State s{0.0, u};
  for (int i = 0; i < 20; ++i) s = step(s, 0.05, cfg);
  CHECK(sup(std::vector<double>(s.u.values)) == doctest::Approx(1 / (2 * pi)));
  for (double v : s.u.values) CHECK(v == doctest::Approx(1 / (2 * pi)).epsilon(1e-14));
  CHECK(s.time == doctest::Approx(1.0));
}

TEST_CASE("small perturbations decay at the linearized rate") {
  // v = δ cos kθ: ∂ₜv = -ū Λv + ε v'' with ū = 1/2π, so |v| ∝ exp(-(k/2π + εk²)t)
  const double eps = 1e-2, delta = 1e-7, t_end = 0.5;
  for (int k : {1, 3, 7}) {
    SolverConfig cfg;
    cfg.epsilon = eps;
    cfg.t_end = t_end;
    const auto out = run(cosine(64, delta, k), cfg);
    const auto c = spectral::to_spectral(out.back().u.domain, out.back().u.values);
    const double amp = 2 * std::abs(c[k]) * 2 * pi;
    const double expected = delta * std::exp(-(k / (2 * pi) + eps * k * k) * t_end);
    CHECK(amp == doctest::Approx(expected).epsilon(1e-5));
  }
}

TEST_CASE("semicircle advanced from t = 0.25 to 0.5 matches the closed form") {
  const auto d = Domain::truncated_line(8.0, 2048);
  auto u0 = field(d, [](double x) { return oracle::semicircle_density(0.25, x); }, 0.25);
  normalize(u0);
  SolverConfig cfg;
  cfg.epsilon = 1e-4;
  cfg.t_end = 0.5;
  cfg.tol_neg = 1e-2;
  const auto out = run(u0, cfg);
  REQUIRE(out.size() == 1);
  CHECK(out[0].time == 0.5);
  double l1 = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) l1 += std::abs(out[0].u.values[j] - oracle::semicircle_density(0.5, d.x(j)));
  CHECK(l1 * d.dx() <= 2e-2);
}

TEST_CASE("time step selection") {
  SolverConfig cfg;
  cfg.dt_max = 0.05;
  CHECK(suggest_dt(State{0.0, cosine(64, 0.0)}, cfg) == 0.05);

  // cos perturbation: max|Hu| = max|u - ū| = A/2π
  cfg.dt_max = 10.0;
  const double amp = 0.5;
  const auto u64 = cosine(64, amp);
  const double dt64 = suggest_dt(State{0.0, u64}, cfg);
  CHECK(dt64 == doctest::Approx(cfg.cfl_number * u64.domain.dx() / (amp / (2 * pi))).epsilon(1e-12));
  CHECK(suggest_dt(State{0.0, cosine(128, amp)}, cfg) == doctest::Approx(dt64 / 2).epsilon(1e-12));

  SolverConfig strict;
  CHECK_THROWS_AS(step(State{0.0, u64}, 10 * dt64, strict), std::invalid_argument);
  CHECK_THROWS_AS(step(State{0.0, u64}, -1.0, strict), std::invalid_argument);
}

TEST_CASE("run schedule, determinism and conservation") {
  const auto u0 = cosine(128, 0.8, 2);
  SolverConfig cfg;
  cfg.epsilon = 1e-3;
  cfg.t_end = 1.0;
  cfg.output_times = {0.3, 1.0};

  SolverConfig none = cfg;
  none.t_end = 0.0;
  none.output_times.clear();
  const auto trivial = run(u0, none);
  REQUIRE(trivial.size() == 1);
  CHECK(trivial[0].u.values == u0.values);

  std::vector<double> seen;
  const auto a = run(u0, cfg, [&](const State& s) { seen.push_back(s.time); });
  REQUIRE(a.size() == 2);
  CHECK(a[0].time == 0.3);
  CHECK(a[1].time == 1.0);
  CHECK(seen == std::vector<double>{0.3, 1.0});
  const auto b = run(u0, cfg);
  CHECK(a[1].u.values == b[1].u.values);

  CHECK(std::abs(a[1].u.mass() - 1.0) < 1e-12);
  // cos 2θ data is even about θ = 0: u(θ_j) = u(θ_{N-j})
  double asym = 0.0;
  for (std::size_t j = 1; j < 128; ++j) asym = std::max(asym, std::abs(a[1].u.values[j] - a[1].u.values[128 - j]));
  CHECK(asym < 1e-13);

  SolverConfig bad = cfg;
  bad.output_times = {1.0, 0.3};
  CHECK_THROWS_AS(run(u0, bad), std::invalid_argument);
}

TEST_CASE("under-resolved data fails loudly") {
  // a narrow bump on a coarse grid undershoots immediately
  const auto d = Domain::truncated_line(8.0, 64);
  auto u0 = field(d, [](double x) { return std::exp(-x * x / 0.01) / std::sqrt(0.01 * pi); });
  normalize(u0);
  SolverConfig cfg;
  cfg.epsilon = 0.0;
  cfg.t_end = 0.5;
  cfg.tol_neg = 1e-6;
  try {
    run(u0, cfg);
    FAIL("expected a resolution failure");
  } catch (const ResolutionError& e) {
    CHECK(e.time() > 0.0);
    CHECK(e.min_value() < -1e-6);
  }

  DensityField neg = cosine(32, 0.0);
  neg.values[3] = -1.0;
  CHECK_THROWS(run(neg, SolverConfig{}));
}

TEST_CASE("drift validation") {
  const auto d = Domain::torus(32);
  std::vector<double> b(32);
  for (std::size_t j = 0; j < 32; ++j) b[j] = 2 * std::sin(d.x(j));
  const auto spec = DriftSpec::sampled(d, b);
  CHECK(spec.lipschitz_bound == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(DriftSpec::sampled(d, b, 1.0).validate(32), std::invalid_argument);
  CHECK_THROWS_AS(spec.validate(64), std::invalid_argument);
}
