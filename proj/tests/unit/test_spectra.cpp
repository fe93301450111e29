#include <doctest.h>

#include "dqm/spectra.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace dqm;

namespace {

constexpr double kPi = std::numbers::pi;

// With the spin in the one-dimensional sector the up-probability is a a* on
// the apparatus, diagonal with eigenvalue 1 - q^{2n+2} on level n.
ProbabilityLaw oracle_rho_spin(const GeometryState& apparatus) {
  const auto& a = apparatus.backing().amplitudes();
  const double q = apparatus.q();
  ProbabilityLaw law;
  double m2 = 0.0;
  for (int n = 0; n < apparatus.backing().config().n_max; ++n) {
    double w = std::norm(a(n)), p = 1.0 - std::pow(q, 2.0 * n + 2.0);
    law.p0 += w * p;
    m2 += w * p * p;
    if (w > 0) law.histogram.emplace_back(p, w);
  }
  law.variance = m2 - law.p0 * law.p0;
  std::sort(law.histogram.begin(), law.histogram.end());
  return law;
}

}  // namespace

TEST_CASE("moments and spectrum against the diagonal oracle") {
  DeformationParameter q(0.99);
  auto sg = direction_state(Role::SternGerlach, q, kPi / 2, 0.0);
  FullGeometry g({rho_state(Role::Spin, q, 0.0), sg});
  ProbabilityLaw oracle = oracle_rho_spin(sg);
  ProbabilityLaw mom = probability_moments(g, Outcome::Up, Observer::Single);
  CHECK(mom.p0 == doctest::Approx(oracle.p0).epsilon(1e-12));
  CHECK(mom.variance == doctest::Approx(oracle.variance).epsilon(1e-9));
  // frozen values of this configuration
  CHECK(mom.p0 == doctest::Approx(0.4988).epsilon(1e-3));
  CHECK(mom.spread() == doctest::Approx(0.0497).epsilon(1e-2));

  ProbabilityLaw down = probability_moments(g, Outcome::Down, Observer::Single);
  CHECK(down.p0 + mom.p0 == doctest::Approx(1.0));
  CHECK(down.variance == doctest::Approx(mom.variance).epsilon(1e-9));

  SpectralOptions opt;
  opt.per_factor_cap = 400;
  ProbabilityLaw spec = spectral_distribution(g, Outcome::Up, Observer::Single, opt);
  CHECK(spec.provenance == Provenance::Spectral);
  CHECK(!spec.approximate);
  CHECK(spec.p0 == doctest::Approx(oracle.p0).epsilon(1e-10));
  CHECK(spec.variance == doctest::Approx(oracle.variance).epsilon(1e-8));
  double total = 0.0;
  for (const auto& [p, w] : spec.histogram) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& [p, w] : spec.histogram) {
    CHECK(p >= -1e-12);
    CHECK(p <= 1.0 + 1e-12);
  }
}

TEST_CASE("spectrum agrees with moments on entangled blocks") {
  DeformationParameter q(0.9);
  FullGeometry g({semiclassical_state(Role::Spin, q, 1.5, 0.3, 0.2),
                  semiclassical_state(Role::SternGerlach, q, 2.0, 1.1, 0.0)});
  for (Outcome o : {Outcome::Up, Outcome::Down}) {
    auto mom = probability_moments(g, o, Observer::Single);
    auto spec = spectral_distribution(g, o, Observer::Single);
    CHECK(spec.p0 == doctest::Approx(mom.p0).epsilon(1e-9));
    CHECK(spec.variance == doctest::Approx(mom.variance).epsilon(1e-7));
  }

  // the Lanczos path gives the same low moments
  SpectralOptions krylov;
  krylov.dense_block_cap = 4;
  krylov.krylov_nodes = 12;
  auto mom = probability_moments(g, Outcome::Up, Observer::Single);
  auto spec = spectral_distribution(g, Outcome::Up, Observer::Single, krylov);
  CHECK(spec.approximate);
  CHECK(spec.p0 == doctest::Approx(mom.p0).epsilon(1e-9));
  CHECK(spec.variance == doctest::Approx(mom.variance).epsilon(1e-7));
}

TEST_CASE("two-observer spectrum") {
  DeformationParameter q(0.8);
  FullGeometry g({semiclassical_state(Role::Spin, q, 1.0, 0.3, 0.0),
                  pi_basis_state(Role::SternGerlach, q, 1, 0.5, 0.0),
                  semiclassical_state(Role::RelativeOrientation, q, 0.8, 1.0, 0.4)});
  SpectralOptions opt;
  opt.per_factor_cap = 24;
  auto mom = probability_moments(g, Outcome::Up, Observer::Two);
  auto spec = spectral_distribution(g, Outcome::Up, Observer::Two, opt);
  CHECK(spec.p0 == doctest::Approx(mom.p0).epsilon(1e-9));
  CHECK(spec.variance == doctest::Approx(mom.variance).epsilon(1e-7));
}

TEST_CASE("arity and caps") {
  DeformationParameter q(0.9);
  FullGeometry two({rho_state(Role::Spin, q, 0.0), rho_state(Role::SternGerlach, q, 0.0)});
  FullGeometry three({rho_state(Role::Spin, q, 0.0), rho_state(Role::SternGerlach, q, 0.0),
                      rho_state(Role::RelativeOrientation, q, 0.0)});
  CHECK_THROWS_AS(probability_moments(two, Outcome::Up, Observer::Two), ArityError);
  CHECK_THROWS_AS(probability_moments(three, Outcome::Up, Observer::Single), ArityError);
  SpectralOptions opt;
  opt.truncation_override = 100;
  CHECK_THROWS_AS(spectral_distribution(two, Outcome::Up, Observer::Single, opt), SpectralCapExceeded);
}

TEST_CASE("basis apparatus entries") {
  const double q = 0.99;
  FullGeometry g({pi_basis_state(Role::SternGerlach, DeformationParameter(q), 0, 0.0, 0.0)});
  MatrixMoments m = sigma_matrix_moments(g, Observer::Single);
  CHECK(std::abs(m.mean[0][0] - cplx(-q * q * q)) < 1e-14);
  CHECK(std::abs(m.mean[1][1] - cplx(q)) < 1e-14);
  CHECK(std::abs(m.mean[0][1]) < 1e-14);
  CHECK(m.pati_variance[0][0] == doctest::Approx(0.0));
  CHECK(m.pati_variance[0][1] == doctest::Approx(0.0));
  CHECK(m.pati_variance[1][0] == doctest::Approx((1 + q * q) * (1 + q * q) * (1 - q * q)).epsilon(1e-12));
}

TEST_CASE("equatorial spin and apparatus") {
  DeformationParameter q(0.99);
  auto spin = direction_state(Role::Spin, q, kPi / 2, 0.0);
  auto sg = direction_state(Role::SternGerlach, q, kPi / 2, 0.0);

  // oracle from the amplitudes
  const auto& a = spin.backing().amplitudes();
  double ex = 0.0, ey = 0.0, exx = 0.0, eyy = 0.0;
  for (int n = 0; n < 400; ++n) {
    if (n > 0) ex += std::real(std::conj(a(n - 1)) * a(n)) * std::sqrt(1 - std::pow(0.99, 2.0 * n));
    ey += std::norm(a(n)) * std::pow(0.99, n);
    exx += std::norm(a(n)) * (1 - std::pow(0.99, 2.0 * n));
    eyy += std::norm(a(n)) * std::pow(0.99, 2.0 * n);
  }
  SpinMoments s = spin_state_moments(FullGeometry({spin}));
  CHECK(s.mean[0].real() == doctest::Approx(ex).epsilon(1e-12));
  CHECK(s.mean[1].real() == doctest::Approx(ey).epsilon(1e-12));
  CHECK(s.pati_variance[0] == doctest::Approx(exx - ex * ex).epsilon(1e-9));
  CHECK(s.pati_variance[1] == doctest::Approx(eyy - ey * ey).epsilon(1e-9));
  // frozen
  CHECK(s.mean[0].real() == doctest::Approx(0.7018).epsilon(2e-4));
  CHECK(s.mean[1].real() == doctest::Approx(0.7107).epsilon(2e-4));
  CHECK(std::sqrt(s.pati_variance[0]) == doctest::Approx(0.035).epsilon(0.05));
  CHECK(std::sqrt(s.pati_variance[1]) == doctest::Approx(0.035).epsilon(0.05));

  MatrixMoments m = sigma_matrix_moments(FullGeometry({sg}), Observer::Single);
  CHECK(std::abs(m.mean[0][1]) == doctest::Approx(0.9898).epsilon(2e-4));
  CHECK(std::abs(m.mean[0][0]) < 0.02);
}

TEST_CASE("eigenstate families") {
  EigenReport r = verify_eigenstate_families(DeformationParameter(0.9), {0, 6}, {0.5, 2.0}, Truncation{80, 8});
  CHECK(r.checks.size() == 1 + 2 * 7 + 2);
  CHECK(r.ok());
  CHECK(r.worst() < 1e-10);

  EigenReport big = verify_eigenstate_families(DeformationParameter(0.99), {0, 2}, {1.0, 7.0, 17.0});
  CHECK(big.ok());
}

TEST_CASE("sigma variance is a rescaled probability variance") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi), mu(0.0, 3.0);
  DeformationParameter q(0.9);
  Truncation t{120, 8};
  for (int k = 0; k < 8; ++k) {
    FullGeometry g1({semiclassical_state(Role::Spin, q, mu(rng), ang(rng), ang(rng), t),
                     semiclassical_state(Role::SternGerlach, q, mu(rng), ang(rng), ang(rng), t)});
    auto v1 = variance_equivalence_check(g1, Observer::Single);
    CHECK(v1.ok());
    FullGeometry g2({semiclassical_state(Role::Spin, q, mu(rng), ang(rng), ang(rng), t),
                     semiclassical_state(Role::SternGerlach, q, mu(rng), ang(rng), ang(rng), t),
                     semiclassical_state(Role::RelativeOrientation, q, mu(rng), ang(rng), ang(rng), t)});
    auto v2 = variance_equivalence_check(g2, Observer::Two);
    CHECK(v2.ok());
  }
}

TEST_CASE("histogram export") {
  ProbabilityLaw law;
  law.histogram = {{0.25, 0.5}, {0.75, 0.5}};
  law.p0 = 0.5;
  law.variance = 0.0625;
  std::ostringstream os;
  write_histogram_csv(os, law);
  CHECK(os.str() == "p,weight\n0.25,0.5\n0.75,0.5\n");
  auto j = histogram_json(law);
  CHECK(j["bins"].size() == 2);
  CHECK(j["p0"] == 0.5);
}
