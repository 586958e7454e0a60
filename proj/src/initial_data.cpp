#include "bhblow/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "bhblow/error.hpp"
#include "bhblow/kernels.hpp"
#include "bhblow/profile.hpp"

namespace bhblow {

void validate(const DataSpec& s, double half_width) {
  auto fail = [](const std::string& m) { throw ParameterError("data spec: " + m); };
  if (!(s.epsilon > 0.0 && s.epsilon <= 0.1)) fail("epsilon must be in (0, 0.1]");
  if (!(s.M >= 20.0)) fail("M must be >= 20");
  if (!(s.cutoff_inner > 0.0 && s.cutoff_inner < s.cutoff_outer))
    fail("need 0 < cutoff_inner < cutoff_outer");
  if (!(s.cutoff_outer <= half_width / 4.0)) fail("cutoff_outer must be <= L_dom/4");
  if (!(std::pow(s.epsilon, 1.5) <= 0.1 * s.cutoff_inner))
    fail("epsilon^{3/2} must be small compared with cutoff_inner");
  if (!std::isfinite(s.kappa0)) fail("kappa0 must be finite");
  if (!(std::abs(s.perturbation) <= std::pow(s.epsilon, 0.125)))
    fail("perturbation amplitude must not exceed epsilon^{1/8}");
}

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double plateau_cutoff(double x, double inner, double outer) {
  return smooth_step((outer - std::abs(x)) / (outer - inner));
}

double scaled_profile_cutoff(double x, double eps, double inner, double outer, double kappa0) {
  const double phi = plateau_cutoff(x, inner, outer);
  if (phi == 0.0) return kappa0;
  return std::sqrt(eps) * profile::bar_u(x / std::pow(eps, 1.5)) * phi + kappa0;
}

Field build_u0(const DataSpec& spec, const GridPtr& grid) {
  validate(spec, grid->half_width());
  const double e32 = std::pow(spec.epsilon, 1.5);
  if (grid->dx() > e32 / 8.0) {
    std::ostringstream os;
    os << "grid does not resolve epsilon^{3/2}: dx = " << grid->dx() << " > " << e32 / 8.0;
    throw ResolutionError(os.str());
  }
  // Optional perturbation p(X) = a (c4 X^4 + c5 X^5) e^{-X^2}: it leaves U,
  // U', U'', U''' at the origin untouched.
  double c4 = 0.0, c5 = 0.0;
  if (spec.perturbation != 0.0) {
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    c4 = uni(rng);
    c5 = uni(rng);
  }
  const double se = std::sqrt(spec.epsilon);
  return Field::from_function(grid, [&](double x) {
    double v = scaled_profile_cutoff(x, spec.epsilon, spec.cutoff_inner, spec.cutoff_outer, spec.kappa0);
    if (spec.perturbation != 0.0) {
      const double X = x / e32;
      const double X4 = X * X * X * X;
      v += se * spec.perturbation * (c4 * X4 + c5 * X4 * X) * std::exp(-X * X) *
           plateau_cutoff(x, spec.cutoff_inner, spec.cutoff_outer);
    }
    return v;
  });
}

bool AuditReport::all_pass() const {
  return std::all_of(items.begin(), items.end(), [](const AuditItem& i) { return i.pass; });
}

namespace {

AuditItem upper(std::string name, std::string desc, double measured, double bound) {
  AuditItem it{std::move(name), std::move(desc), measured, bound, 0.0, false};
  it.margin = (bound - std::abs(measured)) / std::abs(bound);
  it.pass = it.margin >= 0.0;
  return it;
}

}  // namespace

AuditReport audit_u0(const Field& u0, const DataSpec& spec) {
  AuditReport rep;
  const SpectralGrid& g = u0.grid();
  const double eps = spec.epsilon, M = spec.M;

  // Support of u0 - kappa0 inside [-1, 1].
  double outside = 0.0;
  for (std::size_t j = 0; j < g.n(); ++j)
    if (std::abs(g.x(j)) > 1.0) outside = std::max(outside, std::abs(u0[j] - spec.kappa0));
  rep.items.push_back({"support", "u0 - kappa0 vanishes outside [-1, 1]", outside, 0.0,
                       -outside, outside == 0.0});

  rep.items.push_back(upper("linf", "||u0||_inf <= M/2", norms(u0).linf, 0.5 * M));

  const Field u1 = derivative(u0, 1);
  const std::size_t jmin = kernels::omp::argmin(u1.samples());
  // Parabolic refinement of the grid minimum of u0'.
  const std::size_t n = g.n();
  const double fm = u1[(jmin + n - 1) % n], f0 = u1[jmin], fp = u1[(jmin + 1) % n];
  const double den = fm - 2.0 * f0 + fp;
  const double shift = den > 0.0 ? 0.5 * (fm - fp) / den : 0.0;
  rep.slope_location = g.wrap(g.x(jmin) + shift * g.dx());
  // Unique: the set where u0' <= min/2 is one contiguous arc around jmin.
  std::size_t arcs = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const bool in = u1[j] <= 0.5 * f0;
    const bool prev = u1[(j + n - 1) % n] <= 0.5 * f0;
    if (in && !prev) ++arcs;
  }
  rep.slope_unique = arcs == 1;
  const auto d0 = interp_derivatives(u0, 0.0, 5);
  {
    AuditItem it{"slope_at_0", "min u0' is attained uniquely at 0 and equals -1/eps", d0[1], -1.0 / eps,
                 0.0, false};
    const double rel = std::abs(d0[1] * eps + 1.0);
    it.margin = 1e-6 - rel;
    it.pass = rep.slope_unique && std::abs(rep.slope_location) <= g.dx() && it.margin >= 0.0 &&
              f0 >= d0[1] - 1e-9 / eps;
    rep.items.push_back(it);
  }
  const double e52 = std::pow(eps, -2.5);
  rep.items.push_back(upper("d2_at_0", "|u0''(0)| <= 1e-6 eps^{-5/2}", d0[2], 1e-6 * e52));
  rep.items.push_back(upper("d2_linf", "||u0''||_inf <= 2 eps^{-5/2}", norms(derivative(u0, 2)).linf, 2.0 * e52));
  const double e4 = std::pow(eps, -4.0);
  rep.items.push_back(upper("d3_at_0", "|u0'''(0) - 6 eps^{-4}| <= eps^{-15/4}/4", d0[3] - 6.0 * e4,
                            0.25 * std::pow(eps, -3.75)));
  rep.items.push_back(upper("d3_linf", "||u0'''||_inf <= M^{3/4} eps^{-4}/2",
                            norms(derivative(u0, 3)).linf, 0.5 * std::pow(M, 0.75) * e4));
  rep.items.push_back(upper("d5_l2", "||u0^(5)||_L2 <= M^4 eps^{-25/4}/2", norms(derivative(u0, 5)).l2,
                            0.5 * std::pow(M, 4.0) * std::pow(eps, -6.25)));
  // ||∂_X U||_L2 = e^{-s/4} ||∂_x u||_L2 with e^s = 1/eps.
  rep.items.push_back(upper("dXU_l2", "||d_X U(., -log eps)||_L2 <= 4", std::pow(eps, 0.25) * norms(u1).l2, 4.0));
  return rep;
}

}  // namespace bhblow
