#include "bhblow/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bhblow/error.hpp"

namespace bhblow::profile {

double bar_u(double X) {
  if (!std::isfinite(X)) throw NumericError("bar_u: non-finite argument");
  const double a = std::abs(X);
  if (a == 0.0) return 0.0;
  // r^3 + r = a with r = -sign(X) U. The map is increasing and convex on
  // r > 0, so Newton started above the root decreases monotonically; the
  // start min(a, a^{1/3}) is always above it.
  double r = std::min(a, std::cbrt(a));
  for (int it = 0; it < 200; ++it) {
    const double f = r * r * r + r - a;
    const double next = r - f / (3.0 * r * r + 1.0);
    if (!(next < r)) break;
    r = next;
  }
  return X > 0.0 ? -r : r;
}

double bar_u_cardano(double X) {
  const double s = std::sqrt(1.0 / 27.0 + 0.25 * X * X);
  return std::cbrt(-0.5 * X + s) - std::cbrt(0.5 * X + s);
}

ProfileEval bar_u_derivs(double X, int up_to) {
  if (up_to < 1 || up_to > 5) throw ParameterError("bar_u_derivs: up_to must be in 1..5");
  ProfileEval e;
  e.X = X;
  e.up_to = up_to;
  // d[k] is the k-th derivative. Differentiating U^3 + U + X = 0 k times
  // gives U^(k) (1 + 3U^2) = -R_k for k >= 2, where R_k collects the terms
  // of (U^3)^(k) not involving U^(k); they are obtained by evaluating the
  // Leibniz expansion with d[k] still zero.
  std::array<double, 6> d{};
  d[0] = bar_u(X);
  const double denom = 1.0 + 3.0 * d[0] * d[0];
  d[1] = -1.0 / denom;
  auto binom = [](int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
  };
  for (int k = 2; k <= up_to; ++k) {
    d[static_cast<std::size_t>(k)] = 0.0;
    double cube = 0.0;
    for (int i = 0; i <= k; ++i) {
      double sq = 0.0;  // (U^2)^(i)
      for (int j = 0; j <= i; ++j)
        sq += binom(i, j) * d[static_cast<std::size_t>(j)] * d[static_cast<std::size_t>(i - j)];
      cube += binom(k, i) * sq * d[static_cast<std::size_t>(k - i)];
    }
    d[static_cast<std::size_t>(k)] = -cube / denom;
  }
  e.value = d[0];
  for (int k = 1; k <= 5; ++k)
    e.derivs[static_cast<std::size_t>(k - 1)] = k <= up_to ? d[static_cast<std::size_t>(k)] : 0.0;
  return e;
}

double cubic_residual(double X) {
  const double u = bar_u(X);
  return (u * u * u + u + X) / std::max(std::abs(X), 1.0);
}

double ode_residual(double X) {
  const ProfileEval e = bar_u_derivs(X, 1);
  return -0.5 * e.value + (1.5 * X + e.value) * e.derivs[0];
}

double rescaled(double nu, double X) {
  if (!(nu > 0.0)) throw ParameterError("rescaled profile needs nu > 0");
  const double c = nu / 6.0;
  return bar_u(std::sqrt(c) * X) / std::sqrt(c);
}

ProfileEval rescaled_derivs(double nu, double X, int up_to) {
  if (!(nu > 0.0)) throw ParameterError("rescaled profile needs nu > 0");
  const double c = nu / 6.0;
  const double rc = std::sqrt(c);
  ProfileEval e = bar_u_derivs(rc * X, up_to);
  e.X = X;
  e.value /= rc;
  double scale = 1.0;  // c^{(j-1)/2}
  for (int j = 1; j <= 5; ++j) {
    e.derivs[static_cast<std::size_t>(j - 1)] *= scale;
    scale *= rc;
  }
  return e;
}

bool ProfileBoundsReport::all_pass() const {
  return std::all_of(bounds.begin(), bounds.end(), [](const BoundMargin& b) { return b.pass; });
}

std::vector<double> default_bound_samples(double xmax, std::size_t count) {
  if (!(xmax > 1.0) || count < 16) throw ParameterError("bound sampling plan too small");
  std::vector<double> xs;
  const std::size_t half = count / 4;
  const double lo = std::log(1e-6), hi = std::log(xmax);
  for (std::size_t i = 0; i < half; ++i) {
    const double a = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(half - 1));
    xs.push_back(a);
    xs.push_back(-a);
  }
  const std::size_t fine = count - 2 * half;
  for (std::size_t i = 0; i < fine; ++i)
    xs.push_back(-0.2 + 0.4 * static_cast<double>(i) / static_cast<double>(fine - 1));
  xs.push_back(0.0);
  return xs;
}

namespace {

struct Tracker {
  BoundMargin m;
  double slack;
  Tracker(std::string name, std::string desc, double slack_) : slack(slack_) {
    m.name = std::move(name);
    m.description = std::move(desc);
    m.worst_margin = std::numeric_limits<double>::infinity();
  }
  // Upper bound |v| <= b.
  void upper(double X, double v, double b) { record(X, (b - std::abs(v)) / b); }
  // Lower bound |v| >= b.
  void lower(double X, double v, double b) { record(X, (std::abs(v) - b) / b); }
  void record(double X, double margin) {
    ++m.samples;
    if (margin < m.worst_margin) {
      m.worst_margin = margin;
      m.worst_X = X;
    }
  }
  BoundMargin finish() {
    if (m.samples == 0) m.worst_margin = 0.0;
    m.pass = m.worst_margin >= -slack;
    return m;
  }
};

}  // namespace

ProfileBoundsReport profile_bound_margins(std::span<const double> xs) {
  ProfileBoundsReport rep;
  rep.rounding_slack = 8.0 * std::numeric_limits<double>::epsilon();
  const double sl = rep.rounding_slack;
  Tracker all0("all.value", "|U| <= (1+X^2)^(1/6), all X", sl);
  Tracker all1("all.d1", "|U'| <= (1+X^2)^(-1/3), all X", sl);
  Tracker all2("all.d2", "|U''| <= (1+X^2)^(-5/6), all X", sl);
  Tracker farlo("far.d1.lower", "|U'| >= (1/4)(1+X^2)^(-1/3), |X| >= 100", sl);
  Tracker farhi("far.d1.upper", "|U'| <= (7/20)(1+X^2)^(-1/3), |X| >= 100", sl);
  Tracker n0("near.value", "|U| <= 1/6, |X| <= 1/5", sl);
  Tracker n1("near.d1", "|U'| <= 1, |X| <= 1/5", sl);
  Tracker n2("near.d2", "|U''| <= 1, |X| <= 1/5", sl);
  Tracker n3("near.d3", "|U'''| <= 6, |X| <= 1/5", sl);
  Tracker n4("near.d4", "|U''''| <= 30, |X| <= 1/5", sl);
  Tracker n5("near.d5", "|U^(5)| <= 360, |X| <= 1/5", sl);
  Tracker mid("middle.d1", "|U'| <= (1-2l^2)(1+X^2)^(-1/3) for |X| >= l, 0 < l < 1/5", sl);
  for (double X : xs) {
    const ProfileEval e = bar_u_derivs(X, 5);
    const double w = 1.0 + X * X;
    const double a = std::abs(X);
    all0.upper(X, e.value, std::pow(w, 1.0 / 6.0));
    all1.upper(X, e.d(1), std::pow(w, -1.0 / 3.0));
    all2.upper(X, e.d(2), std::pow(w, -5.0 / 6.0));
    if (a >= 100.0) {
      farlo.lower(X, e.d(1), 0.25 * std::pow(w, -1.0 / 3.0));
      farhi.upper(X, e.d(1), 0.35 * std::pow(w, -1.0 / 3.0));
    }
    if (a <= 0.2) {
      n0.upper(X, e.value, 1.0 / 6.0);
      n1.upper(X, e.d(1), 1.0);
      n2.upper(X, e.d(2), 1.0);
      n3.upper(X, e.d(3), 6.0);
      n4.upper(X, e.d(4), 30.0);
      n5.upper(X, e.d(5), 360.0);
    }
    if (a > 0.0) {
      // The bound is tightest for the largest admissible l, l = min(|X|, 1/5).
      const double l = std::min(a, 0.2);
      mid.upper(X, e.d(1), (1.0 - 2.0 * l * l) * std::pow(w, -1.0 / 3.0));
    }
  }
  for (Tracker* t : {&all0, &all1, &all2, &farlo, &farhi, &n0, &n1, &n2, &n3, &n4, &n5, &mid})
    rep.bounds.push_back(t->finish());
  return rep;
}

ProfileBoundsReport check_profile_bounds(std::span<const double> xs) {
  ProfileBoundsReport rep = profile_bound_margins(xs);
  for (const BoundMargin& b : rep.bounds) {
    if (!b.pass) {
      std::ostringstream os;
      os << "profile bound " << b.name << " (" << b.description << ") violated at X = "
         << b.worst_X << ", relative margin " << b.worst_margin;
      throw VerificationError(os.str());
    }
  }
  return rep;
}

}  // namespace bhblow::profile
