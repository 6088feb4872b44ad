#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace dyson::detail {

/// Real-to-complex transform of fixed length backed by FFTW. Instances own
/// aligned scratch buffers and are confined to one thread (see real_fft).
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return n_; }

  /// out[n] = (1/N) Σ_j in[j] e^{-2πi nj/N}, n = 0 … N/2.
  void forward(std::span<const double> in, std::span<std::complex<double>> out);

  /// out[j] = Σ_n c_n e^{2πi nj/N} over the full Hermitian spectrum.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  std::size_t n_;
  double* real_ = nullptr;
  void* spec_ = nullptr;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

/// Per-thread cached transform for length n.
RealFft& real_fft(std::size_t n);

}  // namespace dyson::detail
