#include <doctest.h>

#include "dqm/qkernel.hpp"

#include <cmath>
#include <numbers>

using namespace dqm;

namespace {

const double pi = std::numbers::pi;

// |f(mu,n)|^2 straight from the product formula, in long double.
long double f2_direct(long double q, long double mu, int n) {
  if (n == 0) return 1.0L;
  long double poch = 1.0L;
  for (int k = 0; k <= n - 2; ++k) poch *= 1.0L - std::pow(q, 4.0L + 2.0L * k);
  long double f = std::pow(q, n * (n - 1) / 2.0L) * std::sqrt(std::pow(1.0L - q * q, n - 1.0L)) *
                  std::pow(mu, (long double)n) / std::sqrt(poch);
  return f * f;
}

int argmax_direct(double q, double mu, int n_max) {
  int best = 0;
  long double v = f2_direct(q, mu, 0);
  for (int n = 1; n <= n_max; ++n) {
    long double w = f2_direct(q, mu, n);
    if (w > v) {
      v = w;
      best = n;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("deformation parameter domain") {
  CHECK_THROWS(DeformationParameter(0.0));
  CHECK_THROWS(DeformationParameter(1.01));
  CHECK_NOTHROW(DeformationParameter(1.0));
  CHECK(DeformationParameter(1.0).classical());
}

TEST_CASE("q_pochhammer") {
  CHECK(q_pochhammer(0.5, 0.9, 0) == 1.0);
  const double q = 0.99;
  CHECK(q_pochhammer(std::pow(q, 4), q * q, 1) == doctest::Approx(0.03940399).epsilon(1e-9));
  CHECK(q_pochhammer(1.0, 0.7, 3) == 0.0);
  CHECK(q_pochhammer(0.3, 0.5, 3) == doctest::Approx(0.7 * 0.85 * 0.925));
  CHECK_THROWS(q_pochhammer(0.3, 0.5, -1));
}

TEST_CASE("discretized angle") {
  DeformationParameter q(0.99);
  CHECK(theta_of_n(q, 0L) == doctest::Approx(pi));
  CHECK(theta_of_n(q, Level::infinity()) == 0.0);
  CHECK(theta_of_n(q, 34L) / (pi / 2) == doctest::Approx(1.006).epsilon(1e-3));
  CHECK(theta_of_n(q, 96L) == doctest::Approx(pi / 4).epsilon(0.01));
  for (long n = 0; n < 200; ++n) CHECK(theta_of_n(q, n) > theta_of_n(q, n + 1));

  DeformationParameter fine(0.999);
  CHECK(theta_of_n(fine, 34L) - theta_of_n(fine, 35L) < theta_of_n(q, 34L) - theta_of_n(q, 35L));
}

TEST_CASE("n_closest") {
  DeformationParameter q(0.99);
  CHECK(n_closest(q, pi) == 0);
  CHECK(n_closest(q, pi / 2) == 34);
  CHECK(n_closest(q, pi / 4) == 96);
  CHECK_THROWS(n_closest(q, 0.0));
  CHECK_THROWS(n_closest(q, 4.0));
  for (long n = 1; n <= 120; ++n) CHECK(n_closest(q, theta_of_n(q, n)) == n);

  // midpoint between two levels resolves to the smaller level
  double mid = 0.5 * (theta_of_n(q, 10L) + theta_of_n(q, 11L));
  CHECK(n_closest(q, mid) == 10);
}

TEST_CASE("f coefficient") {
  DeformationParameter q(0.99);
  CHECK(f_coefficient(q, 3.5, 0) == 1.0);
  CHECK(f_coefficient(q, 3.5, 1) == doctest::Approx(3.5));
  for (int n = 0; n < 60; ++n) {
    double direct = std::sqrt((double)f2_direct(0.99, 7.0, n));
    CHECK(f_coefficient(q, 7.0, n) == doctest::Approx(direct).epsilon(1e-10));
    CHECK(f_ratio(q, 7.0, n) ==
          doctest::Approx(f_coefficient(q, 7.0, n + 1) / f_coefficient(q, 7.0, n)).epsilon(1e-10));
  }
  CHECK(f_coefficient(q, 0.0, 3) == 0.0);
}

TEST_CASE("peak levels against a brute-force scan") {
  DeformationParameter q(0.99);
  CHECK(f_peak_level(q, 7.0) == 34);
  CHECK(argmax_direct(0.99, 7.0, 400) == 34);
  for (double mu : {0.5, 1.0, 2.0, 3.3, 7.0, 11.0, 17.0, 17.1, 25.0}) {
    long n = f_peak_level(q, mu);
    CHECK(n == argmax_direct(0.99, mu, 600));
    if (n > 0) {
      CHECK(f_ratio(q, mu, n) <= 1.0);
      CHECK(f_ratio(q, mu, n - 1) >= 1.0);
    }
  }
}

TEST_CASE("mu_of_theta") {
  DeformationParameter q(0.99);
  CHECK(mu_of_theta(q, pi) == 0.0);
  CHECK(mu_of_theta(q, pi / 2) == 7.0);
  double quarter = mu_of_theta(q, pi / 4);
  CHECK(std::round(quarter) == 17.0);
  CHECK(argmax_direct(0.99, quarter, 600) == 96);
  for (long n = 1; n <= 150; n += 7) {
    double mu = mu_of_theta(q, theta_of_n(q, n));
    CHECK(argmax_direct(0.99, mu, 800) == n);
  }
  auto [lo, hi] = mu_interval_for_level(q, 34);
  CHECK(lo == doctest::Approx(6.950).epsilon(1e-3));
  CHECK(hi == doctest::Approx(7.091).epsilon(1e-3));
}
