#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "bhblow/kernels.hpp"

using namespace bhblow::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

std::vector<cplx> random_spec(std::size_t n, unsigned seed) {
  const auto re = random_vec(n, seed), im = random_vec(n, seed + 1);
  std::vector<cplx> s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = {re[j], im[j]};
  return s;
}

}  // namespace

TEST_SUITE("kernels") {
  // Sizes straddle the reduction block so partial-block handling is covered.
  TEST_CASE("parallel and serial kernels agree bit for bit") {
    for (std::size_t n : {std::size_t{17}, kBlock - 1, kBlock, 3 * kBlock + 5}) {
      CAPTURE(n);
      const auto a = random_vec(n, 1), b = random_vec(n, 2), c = random_vec(n, 3), d = random_vec(n, 4),
                 e = random_vec(n, 5);
      std::vector<double> o1(n), o2(n);

      omp::multiply(a, b, o1);
      serial::multiply(a, b, o2);
      CHECK(o1 == o2);
      omp::axpy(a, 0.3, b, o1);
      serial::axpy(a, 0.3, b, o2);
      CHECK(o1 == o2);
      omp::rk4_combine(a, b, c, d, e, 1e-3, o1);
      serial::rk4_combine(a, b, c, d, e, 1e-3, o2);
      CHECK(o1 == o2);

      CHECK(omp::max_abs(a) == serial::max_abs(a));
      CHECK(omp::sum_squares(a) == serial::sum_squares(a));
      CHECK(omp::dot(a, b) == serial::dot(a, b));
      CHECK(omp::argmin(a) == serial::argmin(a));

      const auto s = random_spec(n, 7), m = random_spec(n, 9);
      std::vector<cplx> z1(n), z2(n);
      omp::scale_modes(s, m, z1);
      serial::scale_modes(s, m, z2);
      CHECK(z1 == z2);
      z1 = s;
      z2 = s;
      omp::truncate_modes(z1, n / 3);
      serial::truncate_modes(z2, n / 3);
      CHECK(z1 == z2);
    }
  }

  TEST_CASE("reference values of the serial kernels") {
    const std::vector<double> a{1.0, -4.0, 2.0, -4.0}, b{0.5, 0.5, 1.0, 2.0};
    CHECK(serial::max_abs(a) == 4.0);
    CHECK(serial::sum_squares(a) == 37.0);
    CHECK(serial::dot(a, b) == -7.5);
    CHECK(serial::argmin(a) == 1);  // first of equal minima
    std::vector<double> o(4);
    serial::rk4_combine(a, b, b, b, b, 6.0, o);  // u + dt/6 (k1 + 2k2 + 2k3 + k4)
    CHECK(o[0] == 4.0);
    std::vector<cplx> s{{1, 1}, {2, 2}, {3, 3}, {4, 4}};
    serial::truncate_modes(s, 2);
    CHECK(s[1] == cplx(2, 2));
    CHECK(s[2] == cplx(0, 0));
  }

  TEST_CASE("trigonometric evaluation against a direct sum") {
    const std::size_t n = 40;
    const double L = 1.3;
    const auto spec = random_spec(n / 2 + 1, 11);
    std::vector<cplx> sp = spec;
    sp[0].imag(0.0);
    sp[n / 2].imag(0.0);
    const std::vector<double> xs{-1.2, -0.3, 0.0, 0.77};
    const int P = 4;
    std::vector<double> o1(xs.size() * (P + 1)), o2(o1.size());
    serial::trig_eval(sp, TrigBasis{n, L}, xs, P, o1);
    omp::trig_eval(sp, TrigBasis{n, L}, xs, P, o2);
    CHECK(o1 == o2);
    // f(x) = (1/n) sum_k c_k e^{i k (x + L)} over the full symmetric spectrum.
    for (std::size_t q = 0; q < xs.size(); ++q) {
      for (int p = 0; p <= P; ++p) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j <= n / 2; ++j) {
          const double k = std::numbers::pi / L * static_cast<double>(j);
          const cplx ph = std::exp(cplx(0.0, k * (xs[q] + L)));
          const cplx ik = std::pow(cplx(0.0, k), p);
          if (j == 0) {
            acc += (p == 0 ? 1.0 : 0.0) * sp[0];
          } else if (j == n / 2) {
            if (p % 2 == 0) acc += sp[j].real() * std::pow(-1.0, p / 2) * std::pow(k, p) * std::cos(k * (xs[q] + L));
          } else {
            acc += 2.0 * (ik * sp[j] * ph).real();
          }
        }
        const double scale = std::pow(std::numbers::pi / L * n / 2, p);
        CHECK(o1[q * (P + 1) + p] == doctest::Approx(acc.real() / n).epsilon(1e-12).scale(scale / n));
      }
    }
  }
}
