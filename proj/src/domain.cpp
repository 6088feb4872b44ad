#include "dyson/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dyson {
namespace {

void require_grid_size(std::size_t n) {
  if (n < 8 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("grid size must be a power of two >= 8, got " +
                                std::to_string(n));
  }
}

}  // namespace

Domain::Domain(DomainKind kind, double circumference, double origin, std::size_t n)
    : kind_(kind), circumference_(circumference), origin_(origin), n_(n) {}

Domain Domain::torus(std::size_t n_points) {
  require_grid_size(n_points);
  return Domain(DomainKind::Torus, 2.0 * std::numbers::pi, 0.0, n_points);
}

Domain Domain::truncated_line(double half_width, std::size_t n_points) {
  require_grid_size(n_points);
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("truncated line half-width must be positive");
  }
  return Domain(DomainKind::TruncatedLine, 2.0 * half_width, -half_width, n_points);
}

std::vector<double> Domain::grid() const {
  std::vector<double> out(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = x(j);
  return out;
}

double Domain::wavenumber(std::ptrdiff_t n) const noexcept {
  return 2.0 * std::numbers::pi * static_cast<double>(n) / circumference_;
}

double Domain::periodic_distance(std::size_t i, std::size_t j) const noexcept {
  const std::size_t m = i > j ? i - j : j - i;
  return dx() * static_cast<double>(std::min(m, n_ - m));
}

double DensityField::mass() const {
  return std::accumulate(values.begin(), values.end(), 0.0) * domain.dx();
}

double DensityField::min_value() const {
  return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
}

double DensityField::max_value() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

void DensityField::validate(double tol_neg, double tol_mass) const {
  if (values.size() != domain.size()) {
    throw std::invalid_argument("density has " + std::to_string(values.size()) +
                                " samples, domain expects " + std::to_string(domain.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("density contains non-finite values");
  }
  const double lo = min_value();
  if (lo < -tol_neg) {
    std::ostringstream msg;
    msg << "density minimum " << lo << " below -tol_neg = " << -tol_neg;
    throw std::invalid_argument(msg.str());
  }
  const double m = mass();
  if (std::abs(m - 1.0) > tol_mass) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "density mass " << m << " differs from 1 by more than " << tol_mass;
    throw std::invalid_argument(msg.str());
  }
}

SpectralCoeffs::SpectralCoeffs(Domain domain, std::vector<std::complex<double>> lattice_order)
    : domain_(domain), coeffs_(std::move(lattice_order)) {
  if (coeffs_.size() != domain_.size()) {
    throw std::invalid_argument("coefficient count does not match the domain lattice");
  }
}

std::ptrdiff_t SpectralCoeffs::min_index() const noexcept {
  return -static_cast<std::ptrdiff_t>(coeffs_.size() / 2) + 1;
}

std::ptrdiff_t SpectralCoeffs::max_index() const noexcept {
  return static_cast<std::ptrdiff_t>(coeffs_.size() / 2);
}

std::complex<double> SpectralCoeffs::operator[](std::ptrdiff_t n) const {
  if (n < min_index() || n > max_index()) throw std::out_of_range("wavenumber index out of lattice");
  return coeffs_[static_cast<std::size_t>(n - min_index())];
}

std::complex<double>& SpectralCoeffs::operator[](std::ptrdiff_t n) {
  if (n < min_index() || n > max_index()) throw std::out_of_range("wavenumber index out of lattice");
  return coeffs_[static_cast<std::size_t>(n - min_index())];
}

}  // namespace dyson
