#include <doctest.h>

#include <cmath>

#include "bhblow/error.hpp"
#include "bhblow/initial_data.hpp"
#include "bhblow/profile.hpp"

using namespace bhblow;

namespace {

DataSpec coarse_spec() {
  DataSpec d;
  d.epsilon = 0.1;
  d.cutoff_inner = 0.5;
  d.cutoff_outer = 1.0;
  return d;
}

}  // namespace

TEST_SUITE("initial_data") {
  TEST_CASE("cutoff and step") {
    CHECK(smooth_step(-1.0) == 0.0);
    CHECK(smooth_step(0.0) == 0.0);
    CHECK(smooth_step(1.0) == 1.0);
    CHECK(smooth_step(0.5) == doctest::Approx(0.5));
    CHECK(smooth_step(0.3) + smooth_step(0.7) == doctest::Approx(1.0));
    CHECK(plateau_cutoff(0.4, 0.5, 1.0) == 1.0);
    CHECK(plateau_cutoff(-1.2, 0.5, 1.0) == 0.0);
    CHECK(plateau_cutoff(0.75, 0.5, 1.0) == doctest::Approx(0.5));
  }

  TEST_CASE("constraints at the origin hold by scaling") {
    const DataSpec d = coarse_spec();
    auto g = make_grid(8192, 4.0);
    const Field u0 = build_u0(d, g);
    const auto v = interp_derivatives(u0, 0.0, 3);
    const double eps = d.epsilon;
    CHECK(std::abs(v[0]) < 1e-12);
    CHECK(v[1] == doctest::Approx(-1.0 / eps).epsilon(1e-9));
    CHECK(std::abs(v[2]) <= 1e-6 * std::pow(eps, -2.5));
    CHECK(v[3] == doctest::Approx(6.0 * std::pow(eps, -4)).epsilon(1e-6));
    // Inside the plateau the data is the scaled profile itself.
    const double x = 0.3;
    CHECK(interp(u0, x) == doctest::Approx(std::sqrt(eps) * profile::bar_u(x / std::pow(eps, 1.5))).epsilon(1e-10));
  }

  TEST_CASE("audit passes on admissible data") {
    const DataSpec d = coarse_spec();
    const Field u0 = build_u0(d, make_grid(8192, 4.0));
    const AuditReport rep = audit_u0(u0, d);
    for (const AuditItem& it : rep.items) {
      CAPTURE(it.name);
      CHECK(it.pass);
    }
    CHECK(rep.slope_unique);
    CHECK(std::abs(rep.slope_location) < 1e-12);
  }

  TEST_CASE("preconditions") {
    DataSpec d = coarse_spec();
    CHECK_THROWS_AS(build_u0(d, make_grid(1024, 4.0)), ResolutionError);
    d.epsilon = 0.2;
    CHECK_THROWS_AS(validate(d, 8.0), ParameterError);
    d = coarse_spec();
    d.M = 10.0;
    CHECK_THROWS_AS(validate(d, 8.0), ParameterError);
    d = coarse_spec();
    CHECK_THROWS_AS(validate(d, 3.0), ParameterError);  // cutoff_outer > L/4
    d.perturbation = 1.0;
    CHECK_THROWS_AS(validate(d, 8.0), ParameterError);
    d = coarse_spec();
    d.cutoff_inner = 0.02;  // eps^{3/2} not small against the plateau
    CHECK_THROWS_AS(validate(d, 8.0), ParameterError);
  }

  TEST_CASE("perturbation is seeded and leaves the constraints intact") {
    DataSpec d = coarse_spec();
    d.perturbation = 0.5;
    auto g = make_grid(8192, 4.0);
    const Field a = build_u0(d, g), b = build_u0(d, g);
    for (std::size_t j = 0; j < a.size(); ++j) REQUIRE(a[j] == b[j]);
    d.seed = 2;
    const Field c = build_u0(d, g);
    CHECK(norms(a - c).linf > 0.0);
    const Field plain = build_u0(coarse_spec(), g);
    CHECK(norms(a - plain).linf > 1e-3);
    const auto v = interp_derivatives(a, 0.0, 3), w = interp_derivatives(plain, 0.0, 3);
    CHECK(v[1] == doctest::Approx(w[1]).epsilon(1e-9));
    CHECK(v[3] == doctest::Approx(w[3]).epsilon(1e-6));
  }
}
