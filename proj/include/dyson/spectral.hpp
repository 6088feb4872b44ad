#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "dyson/domain.hpp"

/// Fourier-multiplier operators on periodic grids.
///
/// Transform convention: c_n = (1/N) Σ_j f_j e^{-2πi nj/N}. With this
/// normalization ∫ f² = circumference · Σ |c_n|², the Plancherel constant
/// inherited by every seminorm below. The Nyquist mode is zeroed by every
/// odd multiplier (∂ₓ, H) and by |k|^σ for σ > 0, so all operators map real
/// fields to real fields and commute exactly.
namespace dyson::spectral {

/// Half spectrum in grid phase, indices n = 0 … N/2.
using HalfSpectrum = std::vector<std::complex<double>>;

HalfSpectrum forward(const Domain& domain, std::span<const double> f);
std::vector<double> inverse(const Domain& domain, std::span<const std::complex<double>> half);

/// Full lattice coefficients, phase-referenced to the physical coordinate x.
SpectralCoeffs to_spectral(const Domain& domain, std::span<const double> f);
std::vector<double> to_physical(const SpectralCoeffs& coeffs);

enum class TailPolicy { Ignore, Warn, Error };

struct TailOptions {
  TailPolicy policy = TailPolicy::Warn;
  /// Boundary samples must stay below relative_tol · max|f| on a truncated line.
  double relative_tol = 1e-8;
};

/// max(|f_0|, |f_{N-1}|) / max|f|; zero for a vanishing field.
double boundary_tail_ratio(std::span<const double> f);

/// Multiplier -i·sign(k). On the torus this is the cotangent-kernel transform;
/// on a truncated line it is the periodic transform of circumference 2L, which
/// approximates the real-line H only for fields supported well inside [-L, L].
std::vector<double> hilbert_transform(const Domain& domain, std::span<const double> f,
                                      TailOptions tail = {});

/// Multiplier |k|^σ. σ is the symbol exponent: σ = 1 gives (-Δ)^{1/2}.
std::vector<double> fractional_laplacian(const Domain& domain, std::span<const double> f,
                                         double sigma);

std::vector<double> derivative(const Domain& domain, std::span<const double> f);

/// Multiplier -k², Nyquist mode kept (matches the exact diffusion factor).
std::vector<double> second_derivative(const Domain& domain, std::span<const double> f);

/// ‖f‖²_{Ḣ^s} = circumference · Σ_k |k|^{2s} |c_k|², the Nyquist mode excluded for s > 0.
double sobolev_seminorm_sq(const Domain& domain, std::span<const double> f, double s);

/// Pointwise product evaluated on a 3/2 zero-padded grid and truncated back to
/// |n| < N/2 (input Nyquist modes dropped). Exact for inputs band-limited to |k| ≤ N/3.
std::vector<double> dealiased_product(const Domain& domain, std::span<const double> f,
                                      std::span<const double> g);
Field dealiased_product(const Field& f, const Field& g);

/// Band-limited interpolation of f onto m ≥ N equispaced points (Nyquist dropped).
std::vector<double> resample(const Domain& domain, std::span<const double> f, std::size_t m);

/// Rectangle-rule quadrature Σ f_j Δx.
double integrate(const Domain& domain, std::span<const double> f);

/// ∫ f₁ f₂ … f_m over the domain with m ≤ 4 factors, evaluated on a 2N grid so
/// the integral of band-limited factors is exact. Nyquist modes are dropped.
double integrate_product(const Domain& domain,
                         std::initializer_list<std::span<const double>> factors);

}  // namespace dyson::spectral
