#include "bhblow/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "bhblow/error.hpp"
#include "bhblow/kernels.hpp"

namespace bhblow {

Field hilbert_multiplier(const Field& f) {
  for (double v : f.samples())
    if (!std::isfinite(v)) throw NumericError("hilbert: non-finite sample");
  const SpectralGrid& g = f.grid();
  std::vector<cplx> mult(g.modes(), cplx(0.0, -1.0));
  mult.front() = 0.0;
  mult.back() = 0.0;
  std::vector<cplx> out(g.modes());
  kernels::omp::scale_modes(f.spectrum(), mult, out);
  return Field::from_spectrum(f.grid_ptr(), std::move(out));
}

namespace {

// 15-point Kronrod rule with its embedded 7-point Gauss rule on [-1, 1].
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double kronrod;
  double error;
};

template <class G>
Panel gk15(const G& g, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = g(c);
  double k = fc * kWgk[7];
  double gs = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    const double f1 = g(c - h * kXgk[i]);
    const double f2 = g(c + h * kXgk[i]);
    k += kWgk[i] * (f1 + f2);
    if (i % 2 == 1) gs += kWg[i / 2] * (f1 + f2);
  }
  return {k * h, std::abs((k - gs) * h)};
}

}  // namespace

PVResult hilbert_pv(const std::function<double(double)>& f, double x, const PVQuadratureSpec& spec) {
  const double delta = spec.inner_exclusion, R = spec.outer_cutoff;
  if (!(delta > 0.0) || !(R > delta)) throw ParameterError("PV quadrature needs 0 < delta < R");
  if (spec.node_count < 64) throw ParameterError("PV quadrature needs node_count >= 64");
  if (!std::isfinite(x)) throw NumericError("hilbert_pv: non-finite evaluation point");

  PVResult res;
  auto g = [&](double h) {
    res.evaluations += 2;
    return (f(x - h) - f(x + h)) / h;
  };

  // Near the singularity the symmetric difference quotient tends to -2f'(x),
  // so a fixed Kronrod panel on [0, δ] is enough.
  const Panel inner = gk15(g, 0.0, delta);
  double total = inner.kronrod;
  double err = inner.error;

  const std::size_t panels = std::max<std::size_t>(4, spec.node_count / 15);
  const double ld = std::log(delta), lr = std::log(R);
  const double tol = 1e-13;
  const std::size_t budget = 400 * spec.node_count;
  struct Work {
    double a, b;
    int depth;
  };
  std::vector<Work> stack;
  for (std::size_t p = panels; p-- > 0;) {
    const double a = std::exp(ld + (lr - ld) * static_cast<double>(p) / static_cast<double>(panels));
    const double b = p + 1 == panels
                         ? R
                         : std::exp(ld + (lr - ld) * static_cast<double>(p + 1) / static_cast<double>(panels));
    stack.push_back({a, b, 0});
  }
  bool converged = true;
  while (!stack.empty()) {
    const Work w = stack.back();
    stack.pop_back();
    const Panel pn = gk15(g, w.a, w.b);
    // Panels are log-spaced, so the budget is shared by log-length.
    const double local_tol = std::max(tol * std::log(w.b / w.a) / (lr - ld), 1e-14 * std::abs(pn.kronrod));
    if (pn.error <= local_tol || w.depth >= 40 || res.evaluations > budget) {
      if (pn.error > local_tol) converged = false;
      total += pn.kronrod;
      err += pn.error;
      continue;
    }
    const double m = 0.5 * (w.a + w.b);
    stack.push_back({m, w.b, w.depth + 1});
    stack.push_back({w.a, m, w.depth + 1});
  }

  // Tail: if |g(h)| <= C h^{-4/3} for h >= R (f decaying like |y|^{-1/3}),
  // the remainder is at most 3 C R^{-1/3}. C is estimated on [R, 16R].
  double C = 0.0;
  for (int i = 0; i <= 64; ++i) {
    const double h = R * std::pow(16.0, i / 64.0);
    C = std::max(C, std::abs(g(h)) * std::pow(h, 4.0 / 3.0));
  }
  res.tail_bound = 3.0 * C * std::pow(R, -1.0 / 3.0) / std::numbers::pi;
  res.value = total / std::numbers::pi;
  res.quadrature_error = err / std::numbers::pi;
  if (!converged) throw AccuracyError("hilbert_pv: adaptive panels did not converge", res.value);
  return res;
}

}  // namespace bhblow
