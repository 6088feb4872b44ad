#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "dyson/oracle.hpp"
#include "dyson/rng.hpp"
#include "dyson/spectral.hpp"

using namespace dyson;
using namespace dyson::oracle;
constexpr double pi = std::numbers::pi;

namespace {

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("semicircle density") {
  CHECK(semicircle_density(1.0, 0.0) == doctest::Approx(1 / std::sqrt(pi)));
  CHECK(semicircle_density(0.25, 0.0) == doctest::Approx(2 / std::sqrt(pi)));
  CHECK(semicircle_density(1.0, 2.0) == 0.0);
  CHECK(semicircle_density(1.0, -1.2) == 0.0);
  CHECK_THROWS_AS(semicircle_density(0.0, 0.0), std::invalid_argument);
  // unit mass and second moment t/π
  double m0 = 0, m2 = 0;
  const int n = 200000;
  const double R = 2 * std::sqrt(0.7 / pi), h = 2 * R / n;
  for (int j = 0; j < n; ++j) {
    const double x = -R + (j + 0.5) * h;
    m0 += semicircle_density(0.7, x) * h;
    m2 += x * x * semicircle_density(0.7, x) * h;
  }
  CHECK(m0 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(m2 == doctest::Approx(0.7 / pi).epsilon(1e-6));
}

TEST_CASE("Stieltjes transform") {
  InitialMeasure atom{{Atom{0.0, 1.0}}};
  const auto g = stieltjes(atom, {0.0, 1.0});
  CHECK(g.real() == doctest::Approx(0.0));
  CHECK(g.imag() == doctest::Approx(-1 / pi));
  CHECK_THROWS_AS(stieltjes(atom, {1.0, 0.0}), std::invalid_argument);

  // semicircle boundary values: -Im G(x + i0)/... gives the density, G = (1/π)∫ρ/(z - y)
  InitialMeasure semi{{Semicircle{0.0, 1.0, 1.0}}};
  for (double x : {0.0, 0.3, -0.8}) {
    const auto gz = stieltjes(semi, {x, 1e-10});
    CHECK(-gz.imag() == doctest::Approx(semicircle_density(1.0, x)).epsilon(1e-6));
  }

  // Herglotz: Im G < 0 in the upper half plane for a mixed measure
  InitialMeasure mix{{Atom{-1.0, 0.3}, UniformPiece{0.0, 1.0, 0.3}, Semicircle{2.0, 0.2, 0.4}}, 0.01};
  CounterRng rng(99);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const cplx z{6 * rng.uniform() - 3, std::pow(10.0, -4 + 4 * rng.uniform())};
    if (!(stieltjes(mix, z).imag() < 0)) ++bad;
  }
  CHECK(bad == 0);

  // derivative against a centred difference
  const cplx z{0.4, 0.3}, h{1e-6, 0.0};
  const cplx fd = (stieltjes(mix, z + h) - stieltjes(mix, z - h)) / (2.0 * h);
  CHECK(std::abs(stieltjes_derivative(mix, z) - fd) < 1e-6);
}

TEST_CASE("grid density and closed-form semicircle agree") {
  const auto d = Domain::truncated_line(4.0, 1 << 16);
  DensityField rho{d, std::vector<double>(d.size()), 0.0};
  for (std::size_t j = 0; j < d.size(); ++j) rho.values[j] = semicircle_density(0.5, d.x(j));
  InitialMeasure grid{{GridDensity{rho, 1.0}}};
  InitialMeasure semi{{Semicircle{0.0, 0.5, 1.0}}};
  for (const cplx z : {cplx{0.0, 1.0}, cplx{0.5, 0.5}, cplx{-2.0, 0.2}}) {
    CHECK(std::abs(stieltjes(grid, z) - stieltjes(semi, z)) < 1e-6);
  }
}

TEST_CASE("characteristics: atom becomes the semicircle") {
  InitialMeasure atom{{Atom{0.0, 1.0}}};
  std::vector<double> x;
  for (int j = -60; j <= 60; ++j) x.push_back(0.02 * j);
  CharacteristicsOptions opt;
  opt.delta = 1e-3;
  const auto res = evolve_characteristics(atom, 1.0, x, opt);
  CHECK(res.failure_count == 0);
  CHECK(res.max_imag_g < 0.0);
  double err = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) err = std::max(err, std::abs(res.density[i] - semicircle_density(1.0, x[i])));
  CHECK(err <= 5e-3);
}

TEST_CASE("characteristics: semigroup of the semicircle family") {
  InitialMeasure semi{{Semicircle{0.0, 0.5, 1.0}}};
  const auto d = Domain::truncated_line(3.0, 512);
  const auto u = evolve_characteristics(semi, 0.5, d);
  CHECK(u.time == 0.5);
  double err = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) err = std::max(err, std::abs(u.values[j] - semicircle_density(1.0, d.x(j))));
  CHECK(err <= 5e-3);
  CHECK(u.mass() == doctest::Approx(1.0).epsilon(1e-2));
  CHECK_THROWS(evolve_characteristics(semi, -1.0, d));
}

TEST_CASE("principal-value quadrature") {
  const double a = 0.5, L = 16.0;
  const auto d = Domain::truncated_line(L, 2048);
  std::vector<double> c(d.size(), 0.3), p(d.size()), pp(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) {
    p[j] = poisson_kernel(a, d.x(j));
    pp[j] = periodic_poisson_kernel(a, L, d.x(j));
  }
  // difference-form rules annihilate constants; the plain line kernel does not
  for (auto k : {PvKernel::Periodic, PvKernel::Punctured}) {
    const auto h = hilbert_pv_quadrature(d, c, k);
    CHECK(sup_diff(h, std::vector<double>(d.size(), 0.0)) < 1e-12);
  }
  const spectral::TailOptions quiet{spectral::TailPolicy::Ignore};
  // periodic rule reproduces the spectral transform
  CHECK(sup_diff(hilbert_pv_quadrature(d, p), spectral::hilbert_transform(d, p, quiet)) < 1e-6);
  CHECK(sup_diff(hilbert_pv_quadrature(d, pp), spectral::hilbert_transform(d, pp, quiet)) < 1e-10);
  // line rule against Q_a near the centre, where the truncated tails matter least
  const auto hl = hilbert_pv_quadrature(d, p, PvKernel::Line);
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (std::abs(d.x(j)) < 4.0) CHECK(std::abs(hl[j] - conjugate_poisson_kernel(a, d.x(j))) < 2e-3);
  }
  // the punctured rule is first order: successive differences on shared nodes halve
  auto punct = [&](std::size_t n) {
    const auto dd = Domain::truncated_line(L, n);
    std::vector<double> f(n);
    for (std::size_t j = 0; j < n; ++j) f[j] = poisson_kernel(a, dd.x(j));
    return hilbert_pv_quadrature(dd, f, PvKernel::Punctured);
  };
  const auto h1 = punct(1024), h2 = punct(2048), h4 = punct(4096);
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t j = 0; j < 1024; ++j) {
    e1 = std::max(e1, std::abs(h1[j] - h2[2 * j]));
    e2 = std::max(e2, std::abs(h2[2 * j] - h4[4 * j]));
  }
  CHECK(e2 / e1 == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("Poisson kernels") {
  CHECK(poisson_kernel(0.5, 0.0) == doctest::Approx(1 / (0.5 * pi)));
  CHECK(conjugate_poisson_kernel(0.5, 1.0) == doctest::Approx(1.0 / (pi * 1.25)));
  // the periodized pair approaches the free pair as the period grows
  for (double x : {0.0, 0.4, -1.3}) {
    CHECK(periodic_poisson_kernel(0.3, 400.0, x) == doctest::Approx(poisson_kernel(0.3, x)).epsilon(1e-4));
    CHECK(periodic_conjugate_poisson_kernel(0.3, 400.0, x) ==
          doctest::Approx(conjugate_poisson_kernel(0.3, x)).epsilon(1e-3));
  }
  // P_per integrates to 1 over a period
  const auto d = Domain::truncated_line(2.0, 512);
  std::vector<double> pp(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) pp[j] = periodic_poisson_kernel(0.1, 2.0, d.x(j));
  CHECK(spectral::integrate(d, pp) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sampling measures on a grid") {
  const auto d = Domain::truncated_line(8.0, 4096);
  InitialMeasure two{{Atom{-1.0, 0.5}, Atom{1.0, 0.5}}, 0.02};
  const auto u = sample_measure(two, d);
  CHECK(u.mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(u.min_value() >= 0.0);
  // peak height of half a Poisson kernel of width a
  CHECK(u.max_value() == doctest::Approx(0.5 / (0.02 * pi)).epsilon(2e-2));

  InitialMeasure sharp{{Atom{0.0, 1.0}}};
  CHECK_THROWS(sample_measure(sharp, d));

  // an unmollified uniform piece on grid cells
  InitialMeasure box{{UniformPiece{-1.0, 1.0, 1.0}}};
  const auto b = sample_measure(box, d);
  CHECK(b.mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.values[d.size() / 2] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(b.values[10] == 0.0);

  // mollifying a grid density matches mollifying the closed form it samples
  DensityField rho{d, std::vector<double>(d.size()), 0.0};
  for (std::size_t j = 0; j < d.size(); ++j) rho.values[j] = semicircle_density(0.5, d.x(j));
  const auto g1 = sample_measure(InitialMeasure{{GridDensity{rho, 1.0}}, 0.05}, d);
  const auto g2 = sample_measure(InitialMeasure{{Semicircle{0.0, 0.5, 1.0}}, 0.05}, d);
  CHECK(sup_diff(g1.values, g2.values) < 1e-3);
  DensityField other{Domain::truncated_line(4.0, 64), std::vector<double>(64, 0.125), 0.0};
  CHECK_THROWS(sample_measure(InitialMeasure{{GridDensity{other, 1.0}}}, d));
}

TEST_CASE("measure validation") {
  CHECK_THROWS(InitialMeasure{{}}.validate());
  CHECK_THROWS(InitialMeasure{{UniformPiece{1.0, 0.0, 1.0}}}.validate());
  CHECK_THROWS(InitialMeasure{{Atom{0.0, -1.0}}}.validate());
  CHECK_NOTHROW(InitialMeasure{{Atom{0.0, 1.0}}, 0.1}.validate());
  InitialMeasure m{{Atom{-1.0, 0.5}, Semicircle{2.0, 1.0, 0.5}}};
  CHECK(m.has_atoms());
  CHECK(m.support_diameter() == doctest::Approx(3.0 + 2 / std::sqrt(pi)));
}
