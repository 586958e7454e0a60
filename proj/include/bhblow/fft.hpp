#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace bhblow::fft {

using cplx = std::complex<double>;

/// Real-to-complex transform pair of fixed length n backed by FFTW.
///
/// Plans are built with FFTW_ESTIMATE so the chosen algorithm (and hence
/// every rounding) is the same on every run. Execution is thread-safe.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

  /// Unnormalized forward transform; `out` holds n/2+1 coefficients.
  void forward(std::span<const double> in, std::span<cplx> out) const;
  /// Inverse transform including the 1/n factor.
  void inverse(std::span<const cplx> in, std::span<double> out) const;

 private:
  std::size_t n_;
  void* fwd_;
  void* bwd_;
};

/// Process-wide plan cache keyed by length.
const RealFft& plan_for(std::size_t n);

}  // namespace bhblow::fft
