#include "dyson/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dyson/spectral.hpp"

namespace dyson::oracle {
namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double semicircle_radius(double s) { return 2.0 * std::sqrt(s / kPi); }

// √(ζ-R)√(ζ+R): the branch behaving like ζ at infinity, analytic off [-R, R].
cplx semicircle_root(cplx zeta, double r) { return std::sqrt(zeta - r) * std::sqrt(zeta + r); }

cplx component_g(const Component& c, cplx z) {
  return std::visit(
      overloaded{
          [z](const Atom& a) { return a.weight / (kPi * (z - a.location)); },
          [z](const UniformPiece& u) {
            return u.weight / (kPi * (u.b - u.a)) * (std::log(z - u.a) - std::log(z - u.b));
          },
          [z](const Semicircle& s) {
            const cplx zeta = z - s.center;
            const double r = semicircle_radius(s.time_parameter);
            return s.weight * (zeta - semicircle_root(zeta, r)) / (2.0 * s.time_parameter);
          },
          [z](const GridDensity& g) {
            const Domain& d = g.density.domain;
            cplx acc{};
            for (std::size_t j = 0; j < d.size(); ++j) acc += g.density.values[j] / (z - d.x(j));
            return g.weight * acc * d.dx() / kPi;
          },
      },
      c);
}

cplx component_dg(const Component& c, cplx z) {
  return std::visit(
      overloaded{
          [z](const Atom& a) {
            const cplx q = z - a.location;
            return -a.weight / (kPi * q * q);
          },
          [z](const UniformPiece& u) {
            return u.weight / (kPi * (u.b - u.a)) * (1.0 / (z - u.a) - 1.0 / (z - u.b));
          },
          [z](const Semicircle& s) {
            const cplx zeta = z - s.center;
            const double r = semicircle_radius(s.time_parameter);
            return s.weight * (1.0 - zeta / semicircle_root(zeta, r)) / (2.0 * s.time_parameter);
          },
          [z](const GridDensity& g) {
            const Domain& d = g.density.domain;
            cplx acc{};
            for (std::size_t j = 0; j < d.size(); ++j) {
              const cplx q = z - d.x(j);
              acc -= g.density.values[j] / (q * q);
            }
            return g.weight * acc * d.dx() / kPi;
          },
      },
      c);
}

struct Solve {
  cplx z;
  bool fallback = false;
  bool failed = false;
};

// z + tG₀(z) = w by damped Newton from z = w; when Newton stalls, the map
// z ↦ w - tG₀(z) sends the upper half-plane strictly into itself, so its
// iterates converge to the unique fixed point.
Solve solve_characteristic(const InitialMeasure& m, double t, cplx w,
                           const CharacteristicsOptions& opt) {
  auto residual = [&](cplx z) { return z + t * stieltjes(m, z) - w; };
  Solve s{w};
  cplx f = residual(s.z);
  for (int it = 0; it < opt.max_newton && std::abs(f) > opt.tolerance * 0.1; ++it) {
    const cplx stepz = f / (1.0 + t * stieltjes_derivative(m, s.z));
    double lam = 1.0;
    cplx zn = s.z;
    cplx fn = f;
    bool moved = false;
    while (lam > 1e-8) {
      zn = s.z - lam * stepz;
      if (zn.imag() > 0.0) {
        fn = residual(zn);
        if (std::abs(fn) < std::abs(f)) {
          moved = true;
          break;
        }
      }
      lam *= 0.5;
    }
    if (!moved) break;
    s.z = zn;
    f = fn;
  }
  if (std::abs(f) <= 1e-10) return s;

  s.fallback = true;
  cplx z = w;
  for (long it = 0; it < opt.max_fixed_point; ++it) {
    const cplx zn = w - t * stieltjes(m, z);
    const bool done = std::abs(zn - z) < opt.tolerance;
    z = zn;
    if (done) break;
  }
  s.z = z;
  s.failed = !(std::abs(residual(z)) <= 1e-9) || !(z.imag() > 0.0);
  return s;
}

// ∫_a^b P_per(x - y)dy for the periodized Poisson kernel.
double periodic_poisson_mass(double a, double half_width, double x, double lo, double hi) {
  const double c = kPi * a / half_width;
  const double coth = 1.0 / std::tanh(0.5 * c);
  auto anti = [&](double y) {
    const double phi = kPi * (x - y) / half_width;
    return std::atan2(coth * std::sin(0.5 * phi), std::cos(0.5 * phi)) / kPi;
  };
  return anti(lo) - anti(hi);
}

}  // namespace

void InitialMeasure::validate() const {
  if (components.empty()) throw std::invalid_argument("measure has no components");
  if (!(poisson_width >= 0.0)) throw std::invalid_argument("Poisson width must be >= 0");
  double total = 0.0;
  for (const auto& c : components) {
    const double w = std::visit([](const auto& v) { return v.weight; }, c);
    if (!(w > 0.0)) throw std::invalid_argument("component weights must be positive");
    total += w;
    if (const auto* u = std::get_if<UniformPiece>(&c); u && !(u->a < u->b)) {
      throw std::invalid_argument("uniform piece needs a < b");
    }
    if (const auto* s = std::get_if<Semicircle>(&c); s && !(s->time_parameter > 0.0)) {
      throw std::invalid_argument("semicircle time parameter must be positive");
    }
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("component weights must sum to 1");
}

bool InitialMeasure::has_atoms() const {
  return std::any_of(components.begin(), components.end(),
                     [](const Component& c) { return std::holds_alternative<Atom>(c); });
}

double InitialMeasure::support_diameter() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  auto extend = [&](double a, double b) {
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  };
  for (const auto& c : components) {
    std::visit(overloaded{
                   [&](const Atom& a) { extend(a.location, a.location); },
                   [&](const UniformPiece& u) { extend(u.a, u.b); },
                   [&](const Semicircle& s) {
                     const double r = semicircle_radius(s.time_parameter);
                     extend(s.center - r, s.center + r);
                   },
                   [&](const GridDensity& g) {
                     const double peak = g.density.max_value();
                     for (std::size_t j = 0; j < g.density.values.size(); ++j) {
                       if (g.density.values[j] > 1e-14 * peak) extend(g.density.domain.x(j), g.density.domain.x(j));
                     }
                   },
               },
               c);
  }
  return hi >= lo ? hi - lo : 0.0;
}

double semicircle_density(double t, double x) {
  if (!(t > 0.0)) throw std::invalid_argument("semicircle_density: t must be positive");
  const double r2 = 4.0 * t / kPi;
  return x * x < r2 ? std::sqrt(r2 - x * x) / (2.0 * t) : 0.0;
}

cplx stieltjes(const InitialMeasure& measure, cplx z) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("stieltjes: Im z must be positive");
  const cplx zs = z + cplx{0.0, measure.poisson_width};
  cplx g{};
  for (const auto& c : measure.components) g += component_g(c, zs);
  return g;
}

cplx stieltjes_derivative(const InitialMeasure& measure, cplx z) {
  if (!(z.imag() > 0.0)) throw std::invalid_argument("stieltjes: Im z must be positive");
  const cplx zs = z + cplx{0.0, measure.poisson_width};
  cplx g{};
  for (const auto& c : measure.components) g += component_dg(c, zs);
  return g;
}

CharacteristicsResult evolve_characteristics(const InitialMeasure& measure, double t,
                                             std::span<const double> x,
                                             const CharacteristicsOptions& options) {
  if (!(t > 0.0)) throw std::invalid_argument("evolve_characteristics: t must be positive");
  measure.validate();
  CharacteristicsResult res;
  res.delta = options.delta.value_or(1e-3 * (measure.support_diameter() + 4.0 * std::sqrt(t / kPi)));
  if (!(res.delta > 0.0)) throw std::invalid_argument("evolve_characteristics: delta must be positive");
  res.x.assign(x.begin(), x.end());
  res.density.assign(x.size(), 0.0);
  res.failed.assign(x.size(), 0);

  auto density_at = [&](double xi, double delta, std::size_t i) {
    const Solve s = solve_characteristic(measure, t, cplx{xi, delta}, options);
    if (s.fallback) ++res.fallback_count;
    if (s.failed) {
      res.failed[i] = 1;
      return std::numeric_limits<double>::quiet_NaN();
    }
    const cplx g = stieltjes(measure, s.z);
    res.max_imag_g = std::max(res.max_imag_g, g.imag());
    return -g.imag();
  };

  for (std::size_t i = 0; i < x.size(); ++i) {
    const double coarse = density_at(x[i], res.delta, i);
    res.density[i] = options.richardson ? 2.0 * density_at(x[i], 0.5 * res.delta, i) - coarse : coarse;
    if (res.failed[i]) ++res.failure_count;
  }
  return res;
}

DensityField evolve_characteristics(const InitialMeasure& measure, double t, const Domain& domain,
                                    const CharacteristicsOptions& options) {
  const std::vector<double> xs = domain.grid();
  CharacteristicsResult r = evolve_characteristics(measure, t, xs, options);
  return DensityField{domain, std::move(r.density), t};
}

std::vector<double> hilbert_pv_quadrature(const Domain& domain, std::span<const double> f,
                                          PvKernel kernel) {
  const std::size_t n = domain.size();
  if (f.size() != n) throw std::invalid_argument("hilbert_pv_quadrature: length mismatch");
  const double dx = domain.dx();
  std::vector<double> out(n, 0.0);
  if (kernel == PvKernel::Periodic) {
    std::vector<double> cot(n, 0.0);
    for (std::size_t m = 1; m < n; m += 2) cot[m] = 1.0 / std::tan(kPi * static_cast<double>(m) / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t m = 1; m < n; m += 2) {
        const std::size_t j = i >= m ? i - m : i + n - m;
        acc += (f[j] - f[i]) * cot[m];
      }
      out[i] = 2.0 * acc / static_cast<double>(n);
    }
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double diff = (static_cast<double>(i) - static_cast<double>(j)) * dx;
      if (kernel == PvKernel::Line) {
        if (((i > j ? i - j : j - i) & 1u) == 0) continue;
        acc += 2.0 * f[j] / diff;
      } else {
        acc += (f[j] - f[i]) / diff;
      }
    }
    out[i] = acc * dx / kPi;
  }
  return out;
}

double poisson_kernel(double a, double x) { return a / (kPi * (a * a + x * x)); }

double conjugate_poisson_kernel(double a, double x) { return x / (kPi * (a * a + x * x)); }

double periodic_poisson_kernel(double a, double half_width, double x) {
  const double c = kPi * a / half_width;
  return std::sinh(c) / (std::cosh(c) - std::cos(kPi * x / half_width)) / (2.0 * half_width);
}

double periodic_conjugate_poisson_kernel(double a, double half_width, double x) {
  const double c = kPi * a / half_width;
  return std::sin(kPi * x / half_width) / (std::cosh(c) - std::cos(kPi * x / half_width)) /
         (2.0 * half_width);
}

DensityField sample_measure(const InitialMeasure& measure, const Domain& domain) {
  measure.validate();
  const double a = measure.poisson_width;
  if (measure.has_atoms() && !(a > 0.0)) {
    throw std::invalid_argument("atoms need a positive Poisson mollifier width");
  }
  const std::size_t n = domain.size();
  const double lw = domain.half_width();
  const double dx = domain.dx();
  // measured from the domain centre so the torus [0, 2π) uses the same kernels
  const double centre = domain.origin() + lw;
  std::vector<double> u(n, 0.0);

  for (const auto& comp : measure.components) {
    if (const auto* at = std::get_if<Atom>(&comp)) {
      for (std::size_t j = 0; j < n; ++j) u[j] += at->weight * periodic_poisson_kernel(a, lw, domain.x(j) - at->location);
    } else if (const auto* up = std::get_if<UniformPiece>(&comp)) {
      const double level = up->weight / (up->b - up->a);
      for (std::size_t j = 0; j < n; ++j) {
        const double xj = domain.x(j);
        if (a > 0.0) {
          u[j] += level * periodic_poisson_mass(a, lw, xj - centre, up->a - centre, up->b - centre);
        } else {
          const double lo = std::max(xj - 0.5 * dx, up->a);
          const double hi = std::min(xj + 0.5 * dx, up->b);
          if (hi > lo) u[j] += level * (hi - lo) / dx;
        }
      }
    } else if (const auto* sc = std::get_if<Semicircle>(&comp)) {
      const double r = semicircle_radius(sc->time_parameter);
      if (a > 0.0) {
        // Gauss–Chebyshev (second kind) nodes y = c + r cos θ_k
        const auto nodes = static_cast<std::size_t>(std::ceil(20.0 * r / a)) + 64;
        for (std::size_t k = 1; k <= nodes; ++k) {
          const double th = kPi * static_cast<double>(k) / static_cast<double>(nodes + 1);
          const double wk = 2.0 / static_cast<double>(nodes + 1) * std::sin(th) * std::sin(th);
          const double y = sc->center + r * std::cos(th);
          for (std::size_t j = 0; j < n; ++j) u[j] += sc->weight * wk * periodic_poisson_kernel(a, lw, domain.x(j) - y);
        }
      } else {
        for (std::size_t j = 0; j < n; ++j) {
          u[j] += sc->weight * semicircle_density(sc->time_parameter, domain.x(j) - sc->center);
        }
      }
    } else if (const auto* gd = std::get_if<GridDensity>(&comp)) {
      if (!(gd->density.domain == domain)) throw std::invalid_argument("grid density lives on a different domain");
      std::vector<double> v = gd->density.values;
      if (a > 0.0) {
        spectral::HalfSpectrum c = spectral::forward(domain, v);
        for (std::size_t k = 0; k < c.size(); ++k) c[k] *= std::exp(-a * domain.wavenumber(static_cast<std::ptrdiff_t>(k)));
        v = spectral::inverse(domain, c);
      }
      for (std::size_t j = 0; j < n; ++j) u[j] += gd->weight * v[j];
    }
  }
  DensityField out{domain, std::move(u), 0.0};
  const double mass = out.mass();
  if (!(mass > 0.0)) throw std::invalid_argument("sampled measure has no mass on the grid");
  for (double& v : out.values) v /= mass;
  return out;
}

}  // namespace dyson::oracle
