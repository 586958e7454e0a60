#include "bhblow/grid.hpp"

#include <cmath>
#include <numbers>

#include "bhblow/error.hpp"
#include "bhblow/fft.hpp"
#include "bhblow/kernels.hpp"

namespace bhblow {
namespace kn = kernels::omp;

SpectralGrid::SpectralGrid(std::size_t n, double half_width)
    : n_(n), half_width_(half_width), dx_(2.0 * half_width / static_cast<double>(n)) {
  if (n < 16 || n % 2 != 0) throw ParameterError("grid size must be even and >= 16");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw ParameterError("grid half width must be positive");
}

std::vector<double> SpectralGrid::points() const {
  std::vector<double> xs(n_);
  for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
  return xs;
}

double SpectralGrid::wavenumber(std::size_t j) const noexcept {
  return std::numbers::pi / half_width_ * static_cast<double>(j);
}

double SpectralGrid::wrap(double x) const noexcept {
  const double p = 2.0 * half_width_;
  double y = std::fmod(x + half_width_, p);
  if (y < 0.0) y += p;
  return y - half_width_;
}

GridPtr make_grid(std::size_t n, double half_width) {
  return std::make_shared<const SpectralGrid>(n, half_width);
}

Field::Field(GridPtr grid, std::vector<double> samples)
    : grid_(std::move(grid)),
      samples_(std::make_shared<const std::vector<double>>(std::move(samples))),
      cache_(std::make_shared<Cache>()) {
  if (!grid_) throw ParameterError("field needs a grid");
  if (samples_->size() != grid_->n()) throw ParameterError("sample count does not match grid");
}

Field Field::from_function(GridPtr grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid->n());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid->x(j));
  return Field(std::move(grid), std::move(v));
}

Field Field::from_spectrum(GridPtr grid, std::vector<cplx> spectrum) {
  if (spectrum.size() != grid->modes()) throw ParameterError("spectrum size does not match grid");
  std::vector<double> v(grid->n());
  fft::plan_for(grid->n()).inverse(spectrum, v);
  Field out(std::move(grid), std::move(v));
  // The cached spectrum is the one the samples were synthesized from; the
  // Nyquist imaginary part and the zero-mode imaginary part are dropped by
  // the real transform, so clear them to stay consistent.
  spectrum.front().imag(0.0);
  spectrum.back().imag(0.0);
  std::call_once(out.cache_->once, [&] { out.cache_->spectrum = std::move(spectrum); });
  return out;
}

Field Field::zeros(GridPtr grid) {
  std::vector<double> v(grid->n(), 0.0);
  return Field(std::move(grid), std::move(v));
}

std::span<const cplx> Field::spectrum() const {
  std::call_once(cache_->once, [this] {
    cache_->spectrum.resize(grid_->modes());
    fft::plan_for(grid_->n()).forward(*samples_, cache_->spectrum);
  });
  return cache_->spectrum;
}

namespace {

void require_finite(const Field& f, const char* what) {
  for (double v : f.samples())
    if (!std::isfinite(v)) throw NumericError(std::string(what) + ": non-finite sample");
}

void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw ParameterError("fields live on different grids");
}

}  // namespace

Field derivative(const Field& f, int order) {
  if (order < 1 || order > 6) throw ParameterError("derivative order must be in 1..6");
  require_finite(f, "derivative");
  const SpectralGrid& g = f.grid();
  std::vector<cplx> mult(g.modes());
  const cplx ik_unit(0.0, 1.0);
  for (std::size_t j = 0; j < mult.size(); ++j) {
    const cplx ik = ik_unit * g.wavenumber(j);
    cplx m(1.0, 0.0);
    for (int p = 0; p < order; ++p) m *= ik;
    mult[j] = m;
  }
  if (order % 2 == 1) mult[g.nyquist()] = 0.0;
  std::vector<cplx> out(g.modes());
  kn::scale_modes(f.spectrum(), mult, out);
  return Field::from_spectrum(f.grid_ptr(), std::move(out));
}

Field dealiased_product(const Field& f, const Field& g) {
  require_same_grid(f, g);
  const SpectralGrid& gr = f.grid();
  std::vector<double> prod(gr.n());
  kn::multiply(f.samples(), g.samples(), prod);
  std::vector<cplx> spec(gr.modes());
  fft::plan_for(gr.n()).forward(prod, spec);
  kn::truncate_modes(spec, gr.dealias_cutoff());
  return Field::from_spectrum(f.grid_ptr(), std::move(spec));
}

std::vector<double> interp_derivatives(const Field& f, std::span<const double> xs,
                                       int max_order) {
  if (max_order < 0 || max_order > 6) throw ParameterError("interpolation order must be in 0..6");
  const SpectralGrid& g = f.grid();
  std::vector<double> wrapped(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i])) throw NumericError("interp: non-finite query point");
    wrapped[i] = g.wrap(xs[i]);
  }
  std::vector<double> out(xs.size() * static_cast<std::size_t>(max_order + 1));
  kn::trig_eval(f.spectrum(), {g.n(), g.half_width()}, wrapped, max_order, out);
  return out;
}

std::vector<double> interp_derivatives(const Field& f, double x, int max_order) {
  const double xs[1] = {x};
  return interp_derivatives(f, std::span<const double>(xs, 1), max_order);
}

double interp(const Field& f, double x) { return interp_derivatives(f, x, 0)[0]; }

Norms norms(const Field& f) {
  const double dx = f.grid().dx();
  return {std::sqrt(dx * kn::sum_squares(f.samples())), kn::max_abs(f.samples())};
}

double spectral_energy(const Field& f) {
  const auto s = f.spectrum();
  const std::size_t nyq = f.grid().nyquist();
  double e = std::norm(s[0]) + std::norm(s[nyq]);
  for (std::size_t j = 1; j < nyq; ++j) e += 2.0 * std::norm(s[j]);
  const double n = static_cast<double>(f.grid().n());
  return f.grid().dx() * e / n;
}

double mean(const Field& f) {
  return f.spectrum()[0].real() / static_cast<double>(f.grid().n());
}

double inner(const Field& f, const Field& g) {
  require_same_grid(f, g);
  return f.grid().dx() * kn::dot(f.samples(), g.samples());
}

Field operator+(const Field& a, const Field& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  kn::axpy(a.samples(), 1.0, b.samples(), v);
  return Field(a.grid_ptr(), std::move(v));
}

Field operator-(const Field& a, const Field& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  kn::axpy(a.samples(), -1.0, b.samples(), v);
  return Field(a.grid_ptr(), std::move(v));
}

Field operator*(double s, const Field& a) {
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = s * a[i];
  return Field(a.grid_ptr(), std::move(v));
}

}  // namespace bhblow
