#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "dyson/domain.hpp"

namespace dyson::oracle {

using cplx = std::complex<double>;

struct Atom {
  double location = 0.0;
  double weight = 1.0;
};

struct UniformPiece {
  double a = 0.0;
  double b = 1.0;
  double weight = 1.0;
};

/// Weight times the self-similar profile (1/(2s))√(4s/π - (x-c)²)₊.
struct Semicircle {
  double center = 0.0;
  double time_parameter = 1.0;
  double weight = 1.0;
};

/// Grid samples treated as a density on the line (rectangle quadrature).
struct GridDensity {
  DensityField density;
  double weight = 1.0;
};

using Component = std::variant<Atom, UniformPiece, Semicircle, GridDensity>;

/// Mixture of components, optionally convolved with the Poisson kernel of
/// width poisson_width.
struct InitialMeasure {
  std::vector<Component> components;
  double poisson_width = 0.0;

  void validate() const;
  bool has_atoms() const;
  /// Diameter of the union of the components' supports.
  double support_diameter() const;
};

/// (1/(2t))√(4t/π - x²) on |x| <= 2√(t/π), else 0.
double semicircle_density(double t, double x);

/// G(z) = (1/π)∫dμ(y)/(z - y) of the (mollified) measure, Im z > 0.
cplx stieltjes(const InitialMeasure& measure, cplx z);
cplx stieltjes_derivative(const InitialMeasure& measure, cplx z);

struct CharacteristicsOptions {
  /// Height above the real axis of the targets; default
  /// 1e-3 · (support diameter + 4√(t/π)).
  std::optional<double> delta;
  bool richardson = true;
  int max_newton = 50;
  double tolerance = 1e-12;
  long max_fixed_point = 400000;
};

struct CharacteristicsResult {
  std::vector<double> x;
  std::vector<double> density;
  /// Nonzero where neither Newton nor the fixed-point iteration converged.
  std::vector<std::uint8_t> failed;
  std::size_t fallback_count = 0;
  std::size_t failure_count = 0;
  double delta = 0.0;
  /// Largest Im G seen at the solved points (negative when Herglotz holds).
  double max_imag_g = -std::numeric_limits<double>::infinity();
};

/// Density at time t of the Dyson flow started from `measure`: solves
/// z + tG₀(z) = x + iδ in the upper half-plane and returns -Im G₀(z),
/// optionally Richardson-extrapolated between δ and δ/2.
CharacteristicsResult evolve_characteristics(const InitialMeasure& measure, double t,
                                             std::span<const double> x,
                                             const CharacteristicsOptions& options = {});

DensityField evolve_characteristics(const InitialMeasure& measure, double t, const Domain& domain,
                                    const CharacteristicsOptions& options = {});

enum class PvKernel {
  Periodic,   // alternating-point rule, cotangent kernel of the grid period
  Line,       // alternating-point rule, kernel 1/(π(x - y)), no periodic images
  Punctured,  // (1/π)Σ_{j≠i}(f_j - f_i)Δx/(x_i - x_j)
};

/// Direct O(N²) principal-value sum for H[f] on the grid of `domain`.
std::vector<double> hilbert_pv_quadrature(const Domain& domain, std::span<const double> f,
                                          PvKernel kernel = PvKernel::Periodic);

double poisson_kernel(double a, double x);
double conjugate_poisson_kernel(double a, double x);
/// Poisson kernel of width a summed over the period 2L, and its conjugate.
double periodic_poisson_kernel(double a, double half_width, double x);
double periodic_conjugate_poisson_kernel(double a, double half_width, double x);

/// Samples the (mollified) measure onto the grid and rescales to unit mass.
/// Atoms require a positive Poisson width.
DensityField sample_measure(const InitialMeasure& measure, const Domain& domain);

}  // namespace dyson::oracle
