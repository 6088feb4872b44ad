#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dyson {

enum class DomainKind { Torus, TruncatedLine };

/// Uniform periodic grid. The torus has circumference 2π and grid points
/// θ_j = jΔx; the truncated line [-L, L) is treated as a torus of
/// circumference 2L with x_j = -L + jΔx.
class Domain {
 public:
  static Domain torus(std::size_t n_points);
  static Domain truncated_line(double half_width, std::size_t n_points);

  DomainKind kind() const noexcept { return kind_; }
  bool is_torus() const noexcept { return kind_ == DomainKind::Torus; }
  std::size_t size() const noexcept { return n_; }
  double circumference() const noexcept { return circumference_; }
  double half_width() const noexcept { return circumference_ / 2; }
  double origin() const noexcept { return origin_; }
  double dx() const noexcept { return circumference_ / static_cast<double>(n_); }
  double x(std::size_t j) const noexcept { return origin_ + dx() * static_cast<double>(j); }
  std::vector<double> grid() const;

  /// Wavenumber of lattice index n ∈ {-N/2+1, …, N/2}: k = 2πn / circumference.
  double wavenumber(std::ptrdiff_t n) const noexcept;

  /// Level of the uniform probability density, 1 / circumference.
  double uniform_level() const noexcept { return 1.0 / circumference_; }

  /// Periodic distance between two grid indices.
  double periodic_distance(std::size_t i, std::size_t j) const noexcept;

  bool operator==(const Domain&) const = default;

 private:
  Domain(DomainKind kind, double circumference, double origin, std::size_t n);

  DomainKind kind_;
  double circumference_;
  double origin_;
  std::size_t n_;
};

/// A real field sampled on a domain grid.
struct Field {
  Domain domain;
  std::vector<double> values;
};

/// Grid samples of a probability density at a given time.
struct DensityField {
  Domain domain;
  std::vector<double> values;
  double time = 0.0;

  /// Rectangle-rule mass Σ u_j Δx.
  double mass() const;
  double min_value() const;
  double max_value() const;

  /// Throws std::invalid_argument when the sample count, sign or mass invariants fail.
  void validate(double tol_neg, double tol_mass) const;
};

/// Complex Fourier coefficients on the wavenumber lattice of a domain.
/// coeff(k) = (1/N) Σ_j f(x_j) e^{-ik x_j}, stored for n = -N/2+1 … N/2.
class SpectralCoeffs {
 public:
  SpectralCoeffs(Domain domain, std::vector<std::complex<double>> lattice_order);

  const Domain& domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  std::ptrdiff_t min_index() const noexcept;
  std::ptrdiff_t max_index() const noexcept;

  std::complex<double> operator[](std::ptrdiff_t n) const;
  std::complex<double>& operator[](std::ptrdiff_t n);

  /// Coefficients ordered from n = -N/2+1 up to n = N/2.
  std::span<const std::complex<double>> values() const noexcept { return coeffs_; }

 private:
  Domain domain_;
  std::vector<std::complex<double>> coeffs_;
};

}  // namespace dyson
