#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace bhblow {

using cplx = std::complex<double>;

/// Uniform periodic grid on [-L, L) with n points.
class SpectralGrid {
 public:
  SpectralGrid(std::size_t n, double half_width);

  std::size_t n() const noexcept { return n_; }
  double half_width() const noexcept { return half_width_; }
  double dx() const noexcept { return dx_; }
  std::size_t modes() const noexcept { return n_ / 2 + 1; }
  std::size_t nyquist() const noexcept { return n_ / 2; }

  double x(std::size_t j) const noexcept { return -half_width_ + static_cast<double>(j) * dx_; }
  std::vector<double> points() const;
  /// Wavenumber of the nonnegative-frequency mode j in 0..n/2.
  double wavenumber(std::size_t j) const noexcept;
  /// Modes j with 3j < n survive the 2/3 rule.
  std::size_t dealias_cutoff() const noexcept { return (n_ + 2) / 3; }
  /// Map x into [-L, L).
  double wrap(double x) const noexcept;

  bool operator==(const SpectralGrid& o) const noexcept {
    return n_ == o.n_ && half_width_ == o.half_width_;
  }

 private:
  std::size_t n_;
  double half_width_;
  double dx_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;
GridPtr make_grid(std::size_t n, double half_width);

/// Immutable sampled real function on a grid. The spectrum is computed on
/// first use and shared between copies.
class Field {
 public:
  Field(GridPtr grid, std::vector<double> samples);
  static Field from_function(GridPtr grid, const std::function<double(double)>& f);
  /// Build from n/2+1 nonnegative-frequency coefficients (unnormalized).
  static Field from_spectrum(GridPtr grid, std::vector<cplx> spectrum);
  static Field zeros(GridPtr grid);

  const SpectralGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::span<const double> samples() const noexcept { return *samples_; }
  double operator[](std::size_t j) const noexcept { return (*samples_)[j]; }
  std::size_t size() const noexcept { return samples_->size(); }
  std::span<const cplx> spectrum() const;

 private:
  struct Cache {
    std::once_flag once;
    std::vector<cplx> spectrum;
  };
  GridPtr grid_;
  std::shared_ptr<const std::vector<double>> samples_;
  std::shared_ptr<Cache> cache_;
};

struct Norms {
  double l2;
  double linf;
};

/// Spectral derivative of order 1..6.
Field derivative(const Field& f, int order);
/// Pointwise product with the upper third of the spectrum removed.
Field dealiased_product(const Field& f, const Field& g);
/// Trigonometric interpolant at an off-grid point (wrapped periodically).
double interp(const Field& f, double x);
/// Interpolant and its derivatives of order 0..max_order (max_order <= 6).
std::vector<double> interp_derivatives(const Field& f, double x, int max_order);
/// Same for many points; result is row-major [point][order].
std::vector<double> interp_derivatives(const Field& f, std::span<const double> xs,
                                       int max_order);
/// l2 = sqrt(dx * sum f^2), linf = max |f|.
Norms norms(const Field& f);
/// Parseval side of the energy: dx * sum f^2 computed from the spectrum.
double spectral_energy(const Field& f);
double mean(const Field& f);
/// dx * sum f g.
double inner(const Field& f, const Field& g);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);

}  // namespace bhblow
