#include <doctest.h>

#include "dqm/states.hpp"

#include <cmath>
#include <numbers>

using namespace dqm;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent long-double amplitudes: c_n ~ mu^n q^{n(n-1)/2} (1-q^2)^{n/2} / sqrt((q^2;q^2)_n),
// times q^n for an apparatus.
std::vector<long double> oracle_weights(long double q, long double mu, int n_max, bool apparatus) {
  std::vector<long double> w(n_max);
  long double log_c = 0.0L, total = 0.0L;
  std::vector<long double> logs(n_max);
  for (int n = 0; n < n_max; ++n) {
    if (n > 0) {
      log_c += std::log(mu) + (n - 1) * std::log(q) + 0.5L * std::log1p(-q * q) -
               0.5L * std::log1p(-std::pow(q, 2.0L * n));
      if (apparatus) log_c += std::log(q);
    }
    logs[n] = log_c;
  }
  long double peak = *std::max_element(logs.begin(), logs.end());
  for (int n = 0; n < n_max; ++n) total += w[n] = std::exp(2.0L * (logs[n] - peak));
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace

TEST_CASE("semi-classical amplitudes match the direct series") {
  DeformationParameter q(0.99);
  for (Role role : {Role::Spin, Role::SternGerlach}) {
    auto s = semiclassical_state(role, q, 7.0, 0.4, 0.0);
    const auto& a = s.backing().amplitudes();
    CHECK(std::abs(a.norm() - 1.0) < 1e-12);
    CHECK(s.backing().is_protected());
    CHECK(s.discarded_tail() < kProtectedTail);
    auto w = oracle_weights(0.99L, 7.0L, 400, role == Role::SternGerlach);
    double worst = 0.0;
    for (int n = 0; n < 400; ++n) worst = std::max(worst, std::abs(std::norm(a(n)) - double(w[n])));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("x* x expectation of the equatorial spin") {
  DeformationParameter q(0.99);
  auto s = semiclassical_state(Role::Spin, q, 7.0, 0.0, 0.0);
  auto w = oracle_weights(0.99L, 7.0L, 400, false);
  long double expect = 0.0L;
  for (int n = 0; n < 400; ++n) expect += w[n] * (1.0L - std::pow(0.99L, 2.0L * n));
  const auto& a = s.backing().amplitudes();
  double got = 0.0;
  for (int n = 0; n < 400; ++n) got += std::norm(a(n)) * (1.0 - std::pow(0.99, 2.0 * n));
  CHECK(got == doctest::Approx(double(expect)).epsilon(1e-12));
  CHECK(got == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("truncation protection") {
  DeformationParameter q(0.99);
  Truncation tight{60, 8, false};
  CHECK_THROWS_AS(semiclassical_state(Role::Spin, q, 17.0, 0.0, 0.0, tight), UnprotectedState);
  Truncation grow{60, 8, true};
  auto s = semiclassical_state(Role::Spin, q, 17.0, 0.0, 0.0, grow);
  CHECK(s.truncation().n_max > 60);
  CHECK(s.discarded_tail() < 1e-12);
  CHECK_THROWS_AS(pi_basis_state(Role::Spin, q, 500, 0.0, 0.0), UnprotectedState);
  CHECK_THROWS(semiclassical_state(Role::Spin, DeformationParameter(1.0), 1.0, 0.0, 0.0));
  CHECK_THROWS(semiclassical_state(Role::Spin, q, -1.0, 0.0, 0.0));
}

TEST_CASE("direction and rotation states") {
  DeformationParameter q(0.99);
  auto up = direction_state(Role::Spin, q, 0.0, 1.2);
  CHECK(up.form() == Form::RhoChi);
  CHECK(up.params().chi == doctest::Approx(1.2));

  auto eq = direction_state(Role::SternGerlach, q, kPi / 2, kPi / 2);
  CHECK(eq.form() == Form::Semiclassical);
  CHECK(eq.params().mu == 7.0);
  CHECK(eq.params().phi == doctest::Approx(kPi / 2));

  auto diag = direction_state(Role::Spin, q, kPi / 4, 0.0);
  // no integer mu peaks at level 96, so the interval midpoint is used
  CHECK(f_peak_level(q, diag.params().mu) == 96);
  CHECK(std::round(diag.params().mu) == 17.0);

  auto south = direction_state(Role::Spin, q, kPi, 0.0);
  CHECK(south.form() == Form::PiBasis);
  CHECK(south.params().n == 0);
  CHECK_THROWS(direction_state(Role::RelativeOrientation, q, 1.0, 0.0));

  auto r = rotation_state(q, kPi / 2, 0.4, 0.2);
  CHECK(r.role() == Role::RelativeOrientation);
  CHECK(r.params().chi == doctest::Approx(0.3));
  CHECK(r.params().phi == doctest::Approx(1.5 * kPi - 0.1));
  CHECK(rotation_state(q, 0.0, 0.4, 0.2).form() == Form::RhoChi);
}

TEST_CASE("complex mu is absorbed into the phase") {
  auto [m, w] = absorb_complex_mu({0.0, 2.0}, 0.5);
  CHECK(m == doctest::Approx(2.0));
  CHECK(w == doctest::Approx(wrap_angle(0.5 - kPi / 2)));
  auto [m0, w0] = absorb_complex_mu({0.0, 0.0}, 7.0);
  CHECK(m0 == 0.0);
  CHECK(w0 == doctest::Approx(7.0 - 2 * kPi));
}

TEST_CASE("full geometry") {
  DeformationParameter q(0.9);
  FullGeometry g({rho_state(Role::Spin, q, 0.0), pi_basis_state(Role::SternGerlach, q, 2, 0.0, 0.0)});
  CHECK(g.has(Role::Spin));
  CHECK(!g.has(Role::RelativeOrientation));
  CHECK(g.product().size() == 2);
  CHECK_THROWS(g.factor(Role::RelativeOrientation));
  CHECK_THROWS(FullGeometry({rho_state(Role::Spin, q, 0.0), rho_state(Role::Spin, q, 1.0)}));
  CHECK_THROWS(FullGeometry({rho_state(Role::Spin, q, 0.0), rho_state(Role::SternGerlach, DeformationParameter(0.8), 1.0)}));
  CHECK_THROWS(FullGeometry(std::vector<GeometryState>{}));
}

TEST_CASE("json round trip and field errors") {
  DeformationParameter q(0.95);
  for (const auto& s : {rho_state(Role::Spin, q, 0.7), pi_basis_state(Role::SternGerlach, q, 3, 1.0, 2.0),
                        semiclassical_state(Role::RelativeOrientation, q, 4.0, 0.2, 0.1)}) {
    auto back = geometry_state_from_json(to_json(s));
    CHECK(back.role() == s.role());
    CHECK(back.form() == s.form());
    CHECK((back.backing().amplitudes() - s.backing().amplitudes()).norm() < 1e-15);
  }
  auto j = to_json(semiclassical_state(Role::Spin, q, 4.0, 0.2, 0.1));
  j["params"]["mu"] = -1.0;
  try {
    geometry_state_from_json(j);
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("/params/mu") == 0);
  }
  j["params"].erase("mu");
  CHECK_THROWS_WITH(geometry_state_from_json(j, "/spin"), "/spin/params/mu: missing");
  j["role"] = "observer";
  CHECK_THROWS_WITH(geometry_state_from_json(j), "/role: unknown role 'observer'");
}
