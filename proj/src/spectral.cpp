#include "dyson/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace dyson::spectral {
namespace {

using cplx = std::complex<double>;

void require_length(const Domain& domain, std::size_t n) {
  if (n != domain.size()) {
    throw std::invalid_argument("field has " + std::to_string(n) + " samples, domain expects " +
                                std::to_string(domain.size()));
  }
}

// Applies m(n, k) to the half spectrum and transforms back.
template <class Mult>
std::vector<double> apply_multiplier(const Domain& domain, std::span<const double> f, Mult m) {
  HalfSpectrum c = forward(domain, f);
  const std::size_t half = domain.size() / 2;
  for (std::size_t n = 0; n <= half; ++n) {
    c[n] *= m(n, domain.wavenumber(static_cast<std::ptrdiff_t>(n)));
  }
  return inverse(domain, c);
}

// Zero-pads the half spectrum of f (Nyquist dropped) and evaluates on m points.
std::vector<double> padded(const Domain& domain, std::span<const double> f, std::size_t m) {
  HalfSpectrum c = forward(domain, f);
  c.back() = 0.0;
  c.resize(m / 2 + 1, cplx{});
  std::vector<double> out(m);
  detail::real_fft(m).inverse(c, out);
  return out;
}

void check_tail(const Domain& domain, std::span<const double> f, const TailOptions& tail) {
  if (domain.is_torus() || tail.policy == TailPolicy::Ignore) return;
  const double ratio = boundary_tail_ratio(f);
  if (ratio <= tail.relative_tol) return;
  const std::string msg = "hilbert_transform: boundary tail ratio " + std::to_string(ratio) +
                          " exceeds " + std::to_string(tail.relative_tol) +
                          "; periodic images contaminate the result";
  if (tail.policy == TailPolicy::Error) throw std::domain_error(msg);
  static std::atomic<int> warned{0};
  if (warned.fetch_add(1) < 3) std::cerr << "warning: " << msg << '\n';
}

}  // namespace

HalfSpectrum forward(const Domain& domain, std::span<const double> f) {
  require_length(domain, f.size());
  HalfSpectrum c(domain.size() / 2 + 1);
  detail::real_fft(domain.size()).forward(f, c);
  return c;
}

std::vector<double> inverse(const Domain& domain, std::span<const std::complex<double>> half) {
  if (half.size() != domain.size() / 2 + 1) {
    throw std::invalid_argument("half spectrum length does not match the domain");
  }
  std::vector<double> out(domain.size());
  detail::real_fft(domain.size()).inverse(half, out);
  return out;
}

SpectralCoeffs to_spectral(const Domain& domain, std::span<const double> f) {
  const HalfSpectrum c = forward(domain, f);
  const auto half = static_cast<std::ptrdiff_t>(domain.size() / 2);
  std::vector<cplx> lattice(domain.size());
  for (std::ptrdiff_t n = -half + 1; n <= half; ++n) {
    const auto a = static_cast<std::size_t>(std::abs(n));
    const cplx grid = n >= 0 ? c[a] : std::conj(c[a]);
    // grid phase -> physical phase: x_j = origin + jΔx
    const cplx phase = std::polar(1.0, -domain.wavenumber(n) * domain.origin());
    lattice[static_cast<std::size_t>(n + half - 1)] = grid * phase;
  }
  return SpectralCoeffs(domain, std::move(lattice));
}

std::vector<double> to_physical(const SpectralCoeffs& coeffs) {
  const Domain& domain = coeffs.domain();
  const auto half = static_cast<std::ptrdiff_t>(domain.size() / 2);
  HalfSpectrum c(domain.size() / 2 + 1);
  for (std::ptrdiff_t n = 0; n <= half; ++n) {
    c[static_cast<std::size_t>(n)] =
        coeffs[n] * std::polar(1.0, domain.wavenumber(n) * domain.origin());
  }
  return inverse(domain, c);
}

double boundary_tail_ratio(std::span<const double> f) {
  if (f.empty()) return 0.0;
  double peak = 0.0;
  for (double v : f) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  return std::max(std::abs(f.front()), std::abs(f.back())) / peak;
}

std::vector<double> hilbert_transform(const Domain& domain, std::span<const double> f,
                                      TailOptions tail) {
  require_length(domain, f.size());
  check_tail(domain, f, tail);
  const std::size_t half = domain.size() / 2;
  return apply_multiplier(domain, f, [half](std::size_t n, double) {
    return (n == 0 || n == half) ? cplx{} : cplx{0.0, -1.0};
  });
}

std::vector<double> fractional_laplacian(const Domain& domain, std::span<const double> f,
                                         double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("fractional_laplacian: sigma must be >= 0");
  if (sigma == 0.0) {
    require_length(domain, f.size());
    return {f.begin(), f.end()};
  }
  const std::size_t half = domain.size() / 2;
  return apply_multiplier(domain, f, [half, sigma](std::size_t n, double k) {
    return (n == 0 || n == half) ? cplx{} : cplx{std::pow(k, sigma), 0.0};
  });
}

std::vector<double> derivative(const Domain& domain, std::span<const double> f) {
  const std::size_t half = domain.size() / 2;
  return apply_multiplier(domain, f, [half](std::size_t n, double k) {
    return n == half ? cplx{} : cplx{0.0, k};
  });
}

std::vector<double> second_derivative(const Domain& domain, std::span<const double> f) {
  return apply_multiplier(domain, f, [](std::size_t, double k) { return cplx{-k * k, 0.0}; });
}

double sobolev_seminorm_sq(const Domain& domain, std::span<const double> f, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("sobolev_seminorm_sq: s must be >= 0");
  const HalfSpectrum c = forward(domain, f);
  const std::size_t half = domain.size() / 2;
  double acc = 0.0;
  for (std::size_t n = 0; n <= half; ++n) {
    if (s > 0.0 && (n == 0 || n == half)) continue;
    const double w = (n == 0 || n == half) ? 1.0 : 2.0;
    const double k = domain.wavenumber(static_cast<std::ptrdiff_t>(n));
    acc += w * (s > 0.0 ? std::pow(k, 2.0 * s) : 1.0) * std::norm(c[n]);
  }
  return domain.circumference() * acc;
}

std::vector<double> dealiased_product(const Domain& domain, std::span<const double> f,
                                      std::span<const double> g) {
  require_length(domain, f.size());
  require_length(domain, g.size());
  const std::size_t n = domain.size();
  const std::size_t m = 3 * n / 2;
  std::vector<double> pf = padded(domain, f, m);
  const std::vector<double> pg = padded(domain, g, m);
  for (std::size_t j = 0; j < m; ++j) pf[j] *= pg[j];
  HalfSpectrum c(m / 2 + 1);
  detail::real_fft(m).forward(pf, c);
  c.resize(n / 2 + 1);
  c.back() = 0.0;
  return inverse(domain, c);
}

Field dealiased_product(const Field& f, const Field& g) {
  if (!(f.domain == g.domain)) throw std::invalid_argument("dealiased_product: domain mismatch");
  return Field{f.domain, dealiased_product(f.domain, f.values, g.values)};
}

std::vector<double> resample(const Domain& domain, std::span<const double> f, std::size_t m) {
  if (m < domain.size() || m % 2 != 0) {
    throw std::invalid_argument("resample: target size must be even and >= N");
  }
  return padded(domain, f, m);
}

double integrate(const Domain& domain, std::span<const double> f) {
  require_length(domain, f.size());
  double acc = 0.0;
  for (double v : f) acc += v;
  return acc * domain.dx();
}

double integrate_product(const Domain& domain,
                         std::initializer_list<std::span<const double>> factors) {
  if (factors.size() == 0 || factors.size() > 4) {
    throw std::invalid_argument("integrate_product: between 1 and 4 factors");
  }
  const std::size_t m = 2 * domain.size();
  std::vector<double> acc(m, 1.0);
  for (auto f : factors) {
    const std::vector<double> p = padded(domain, f, m);
    for (std::size_t j = 0; j < m; ++j) acc[j] *= p[j];
  }
  double sum = 0.0;
  for (double v : acc) sum += v;
  return sum * domain.circumference() / static_cast<double>(m);
}

}  // namespace dyson::spectral
