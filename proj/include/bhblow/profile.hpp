#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace bhblow::profile {

/// Ū and its derivatives at X. derivs[k] holds the (k+1)-th derivative.
struct ProfileEval {
  double X = 0.0;
  double value = 0.0;
  std::array<double, 5> derivs{};
  int up_to = 0;

  /// Derivative of order k in 0..up_to (order 0 is the value).
  double d(int k) const { return k == 0 ? value : derivs[static_cast<std::size_t>(k - 1)]; }
};

/// Real root of U^3 + U + X = 0 (the stable self-similar Burgers profile).
double bar_u(double X);
/// Closed Cardano expression, used only as a cross-check.
double bar_u_cardano(double X);
ProfileEval bar_u_derivs(double X, int up_to = 5);

/// Ū³ + Ū + X, relative to max(|X|, 1).
double cubic_residual(double X);
/// -Ū/2 + (3X/2 + Ū) Ū'.
double ode_residual(double X);

/// Ū_ν(X) = (ν/6)^{-1/2} Ū((ν/6)^{1/2} X).
double rescaled(double nu, double X);
ProfileEval rescaled_derivs(double nu, double X, int up_to = 5);

struct BoundMargin {
  std::string name;
  std::string description;
  double worst_margin = 0.0;  // (bound - |measured|) / bound, minimised over samples
  double worst_X = 0.0;
  std::size_t samples = 0;
  bool pass = true;
};

struct ProfileBoundsReport {
  std::vector<BoundMargin> bounds;
  /// Relative slack allowed for floating-point rounding on tight bounds.
  double rounding_slack = 0.0;
  bool all_pass() const;
};

/// Default plan: log-spaced |X| in [1e-6, xmax] on both sides plus a fine
/// uniform set on [-1/5, 1/5] and X = 0.
std::vector<double> default_bound_samples(double xmax = 1e4, std::size_t count = 20000);

/// Evaluates every profile bound; never throws.
ProfileBoundsReport profile_bound_margins(std::span<const double> xs);
/// Same, but throws VerificationError naming the first violated bound and X.
ProfileBoundsReport check_profile_bounds(std::span<const double> xs);

}  // namespace bhblow::profile
