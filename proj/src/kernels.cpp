#include "bhblow/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace bhblow::kernels {
namespace detail {

// Sum of the real trigonometric interpolant and its derivatives at x. The
// phase e^{ijα} is advanced by multiplication and re-seeded exactly every
// 64 modes to keep the recurrence error at a few ulps.
void trig_point(std::span<const cplx> spec, TrigBasis basis, double x, int max_order,
                std::span<double> out) {
  const std::size_t n = basis.n;
  const std::size_t nyq = n / 2;
  const double L = basis.half_width;
  const double kunit = std::numbers::pi / L;
  const double alpha = kunit * (x + L);
  std::array<double, 8> acc{};
  const cplx step = std::polar(1.0, alpha);
  cplx phase(1.0, 0.0);
  for (std::size_t j = 1; j < nyq; ++j) {
    if (j % 64 == 1) {
      phase = std::polar(1.0, static_cast<double>(j) * alpha);
    } else {
      phase *= step;
    }
    const cplx z = spec[j] * phase;
    const double k = kunit * static_cast<double>(j);
    double kp = 1.0;
    for (int p = 0; p <= max_order; ++p) {
      double v = 0.0;
      switch (p % 4) {
        case 0: v = z.real(); break;
        case 1: v = -z.imag(); break;
        case 2: v = -z.real(); break;
        default: v = z.imag(); break;
      }
      acc[static_cast<std::size_t>(p)] += kp * v;
      kp *= k;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  const double knyq = kunit * static_cast<double>(nyq);
  const double cnyq = spec[nyq].real() * std::cos(static_cast<double>(nyq) * alpha);
  double kp = 1.0;
  for (int p = 0; p <= max_order; ++p) {
    double v = 2.0 * acc[static_cast<std::size_t>(p)];
    if (p == 0) v += spec[0].real();
    if (p % 2 == 0) v += ((p / 2) % 2 == 0 ? 1.0 : -1.0) * kp * cnyq;
    out[static_cast<std::size_t>(p)] = v * inv_n;
    kp *= knyq;
  }
}

}  // namespace detail

namespace omp {
#define BHBLOW_FOR _Pragma("omp parallel for schedule(static)")
#include "kernels_body.inc"
#undef BHBLOW_FOR
}  // namespace omp

namespace serial {
#define BHBLOW_FOR
#include "kernels_body.inc"
#undef BHBLOW_FOR
}  // namespace serial

}  // namespace bhblow::kernels
