#pragma once

#include <cstddef>
#include <functional>

#include "bhblow/grid.hpp"

namespace bhblow {

/// Periodic Hilbert transform: multiplier -i sgn(k), zero on the mean and
/// Nyquist modes.
Field hilbert_multiplier(const Field& f);

struct PVQuadratureSpec {
  double inner_exclusion = 1e-3;  // δ
  double outer_cutoff = 50.0;     // R
  std::size_t node_count = 4096;  // Kronrod nodes in the initial panel layout
};

struct PVResult {
  double value = 0.0;
  /// Estimate of the neglected contribution from |x - y| > R, assuming the
  /// integrand decays at least like |y|^{-1/3}.
  double tail_bound = 0.0;
  /// Kronrod-minus-Gauss error estimate over the resolved range.
  double quadrature_error = 0.0;
  std::size_t evaluations = 0;
};

/// Principal-value Hilbert transform on the real line,
///   H[f](x) = (1/π) ∫_0^∞ (f(x-h) - f(x+h)) / h dh,
/// split into [0, δ] (where the symmetric difference is smooth), adaptive
/// Gauss-Kronrod panels on [δ, R], and a tail estimate beyond R.
/// Throws AccuracyError when the adaptive panels do not converge.
PVResult hilbert_pv(const std::function<double(double)>& f, double x,
                    const PVQuadratureSpec& spec = {});

}  // namespace bhblow
