#pragma once

// Data-parallel loops used by the solver and the diagnostics.
//
// Every kernel exists twice: `omp` (OpenMP worksharing) and `serial` (plain
// loops, kept as the reference for tests and benchmarks). Reductions are
// split into fixed blocks of kBlock entries whose partial results are
// combined in index order, so both versions return bit-identical values
// regardless of the thread count.

#include <complex>
#include <cstddef>
#include <span>

namespace bhblow::kernels {

using cplx = std::complex<double>;

inline constexpr std::size_t kBlock = 8192;

/// Geometry needed to evaluate a trigonometric interpolant.
struct TrigBasis {
  std::size_t n;
  double half_width;
};

#define BHBLOW_KERNEL_DECLS                                                                \
  void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out); \
  void axpy(std::span<const double> x, double alpha, std::span<const double> y,             \
            std::span<double> out);                                                         \
  void rk4_combine(std::span<const double> u, std::span<const double> k1,                   \
                   std::span<const double> k2, std::span<const double> k3,                  \
                   std::span<const double> k4, double dt, std::span<double> out);           \
  void scale_modes(std::span<const cplx> in, std::span<const cplx> mult, std::span<cplx> out); \
  void truncate_modes(std::span<cplx> spec, std::size_t keep);                              \
  double max_abs(std::span<const double> a);                                                \
  double sum_squares(std::span<const double> a);                                            \
  double dot(std::span<const double> a, std::span<const double> b);                         \
  std::size_t argmin(std::span<const double> a);                                            \
  void trig_eval(std::span<const cplx> spec, TrigBasis basis, std::span<const double> xs,   \
                 int max_order, std::span<double> out);

namespace omp {
BHBLOW_KERNEL_DECLS
}  // namespace omp

namespace serial {
BHBLOW_KERNEL_DECLS
}  // namespace serial

#undef BHBLOW_KERNEL_DECLS

// trig_eval writes, for each query xs[q], the interpolant and its
// derivatives of order 0..max_order into out[q*(max_order+1) + order].
// Odd orders drop the Nyquist mode, matching the spectral derivative.

}  // namespace bhblow::kernels
