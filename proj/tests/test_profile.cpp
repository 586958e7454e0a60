#include <doctest.h>

#include <cmath>

#include "bhblow/error.hpp"
#include "bhblow/profile.hpp"

using namespace bhblow;
using namespace bhblow::profile;

TEST_SUITE("profile") {
  TEST_CASE("values at the origin") {
    const ProfileEval e = bar_u_derivs(0.0, 5);
    CHECK(e.value == 0.0);
    CHECK(e.d(1) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(e.d(2) == 0.0);
    CHECK(e.d(3) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(e.d(4) == 0.0);
    // Taylor series of the root of U^3 + U + X: -X + X^3 - 3X^5 + ..., so U^(5)(0) = -360.
    CHECK(e.d(5) == doctest::Approx(-360.0).epsilon(1e-13));
  }

  TEST_CASE("cubic root agrees with the closed form and is odd") {
    for (double X : {-1e6, -300.0, -2.0, -0.1, 1e-9, 0.37, 5.0, 1e3, 1e8}) {
      CAPTURE(X);
      const double u = bar_u(X);
      CHECK(std::abs(cubic_residual(X)) <= 1e-15);
      CHECK(bar_u(-X) == -u);
      // Cardano subtracts two nearly equal cube roots once |X| is large.
      if (std::abs(X) <= 1e3) CHECK(bar_u_cardano(X) == doctest::Approx(u).epsilon(1e-9));
    }
    // Far field: U ~ -X^{1/3} + X^{-1/3}/3.
    const double X = 1e12;
    CHECK(bar_u(X) == doctest::Approx(-std::cbrt(X) + 1.0 / (3.0 * std::cbrt(X))).epsilon(1e-15));
  }

  TEST_CASE("derivatives match implicit differentiation") {
    // U' = -1/(1+3U^2), U'' = 6 U U'^3, U''' = 6 U'^4 + 18 U U'^2 U''.
    for (double X : {-50.0, -1.3, -0.05, 0.2, 0.9, 7.0, 1e4}) {
      CAPTURE(X);
      const ProfileEval e = bar_u_derivs(X, 5);
      const double u = e.value, u1 = -1.0 / (1.0 + 3.0 * u * u), u2 = 6.0 * u * u1 * u1 * u1;
      const double u3 = 6.0 * std::pow(u1, 4) + 18.0 * u * u1 * u1 * u2;
      CHECK(e.d(1) == doctest::Approx(u1).epsilon(1e-14));
      CHECK(e.d(2) == doctest::Approx(u2).epsilon(1e-13));
      CHECK(e.d(3) == doctest::Approx(u3).epsilon(1e-12));
      // Orders 4, 5 by central differences of the analytic lower orders.
      const double h = 1e-4 * std::max(1.0, std::abs(X));
      const auto p = bar_u_derivs(X + h, 5), m = bar_u_derivs(X - h, 5);
      CHECK(e.d(4) == doctest::Approx((p.d(3) - m.d(3)) / (2 * h)).epsilon(1e-5).scale(1e-12));
      CHECK(e.d(5) == doctest::Approx((p.d(4) - m.d(4)) / (2 * h)).epsilon(1e-5).scale(1e-12));
    }
  }

  TEST_CASE("self-similar Burgers residual") {
    for (double X : {-1e3, -3.0, -0.01, 0.0, 0.5, 42.0}) CHECK(std::abs(ode_residual(X)) < 1e-14);
  }

  TEST_CASE("rescaled profile") {
    const ProfileEval e = rescaled_derivs(12.0, 0.0, 3);
    CHECK(e.d(1) == doctest::Approx(-1.0));
    CHECK(e.d(3) == doctest::Approx(12.0).epsilon(1e-14));
    CHECK(rescaled(6.0, 1.7) == bar_u(1.7));
    CHECK_THROWS_AS(rescaled(0.0, 1.0), ParameterError);
  }

  TEST_CASE("bound report covers the fixed list") {
    const auto xs = default_bound_samples(1e4, 2000);
    const ProfileBoundsReport rep = profile_bound_margins(xs);
    REQUIRE(rep.bounds.size() == 12);
    for (const auto& b : rep.bounds) {
      CAPTURE(b.name);
      if (b.name == "near.value") {
        // |U| <= 1/6 on |X| <= 1/5 is false: U(1/5) = -0.1931...
        CHECK_FALSE(b.pass);
        CHECK(std::abs(b.worst_X) == doctest::Approx(0.2));
      } else {
        CHECK(b.pass);
      }
    }
    CHECK_THROWS_AS(check_profile_bounds(xs), VerificationError);
  }
}
