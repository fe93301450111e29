#include <doctest.h>

#include "dqm/philox.hpp"
#include "dqm/protocol.hpp"

#include <cmath>
#include <numbers>

using namespace dqm;

namespace {

constexpr double kPi = std::numbers::pi;

ProbabilityLaw spectral_law(std::vector<std::pair<double, double>> bins) {
  ProbabilityLaw law;
  law.provenance = Provenance::Spectral;
  law.histogram = std::move(bins);
  double m2 = 0.0;
  for (const auto& [p, w] : law.histogram) {
    law.p0 += p * w;
    m2 += p * p * w;
  }
  law.variance = m2 - law.p0 * law.p0;
  return law;
}

}  // namespace

TEST_CASE("philox known answers") {
  auto z = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
  CHECK(z == std::array<std::uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  auto f = Philox4x32::generate({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff});
  CHECK(f == std::array<std::uint32_t, 4>{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  auto pi = Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0});
  CHECK(pi == std::array<std::uint32_t, 4>{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("classical baseline") {
  CHECK(classical_baseline(1.0, 7) == std::pair<double, double>{1.0, 0.0});
  auto [m, s] = classical_baseline(0.5, 100);
  CHECK(m == doctest::Approx(0.0));
  CHECK(s == doctest::Approx(0.1));
  CHECK(classical_baseline(0.3, 1'000'000'000).second < 1e-4);
  CHECK_THROWS(classical_baseline(1.5, 10));
}

TEST_CASE("count law") {
  auto c = count_law(0.3, 0.0, 100);
  CHECK(c.expected_k == doctest::Approx(30.0));
  CHECK(c.spread_k == doctest::Approx(std::sqrt(100 * 0.3 * 0.7)));
  CHECK(count_law(0.3, 0.05, 1).spread_k == doctest::Approx(std::sqrt(0.21)));
  auto big = count_law(0.4, 0.0025, 100'000'000);
  CHECK(big.spread_k / 1e8 == doctest::Approx(0.05).epsilon(1e-3));
  CHECK_THROWS(count_law(0.4, -1.0, 10));
}

TEST_CASE("measured sigma law") {
  for (double p0 : {0.0, 0.2, 0.5, 1.0}) {
    for (long N : {1L, 10L, 1000L}) {
      auto a = measured_sigma_law(p0, 0.0, N, 1.0);
      auto b = classical_baseline(p0, N);
      CHECK(a.first == doctest::Approx(b.first));
      CHECK(a.second == doctest::Approx(b.second));
    }
  }
  CHECK(measured_sigma_law(1.0, 0.0, 50, 0.99).first == doctest::Approx(0.99));
  // the deformed spread levels off, the classical one does not
  const double q = 0.99, k = q + 1 / q;
  auto lim = measured_sigma_law(0.5, 0.004, 100'000'000, q).second;
  CHECK(lim == doctest::Approx(k * std::sqrt(0.004)).epsilon(1e-4));
  CHECK(classical_baseline(0.5, 100'000'000).second < 1e-3 * lim);
}

TEST_CASE("sampling") {
  auto spike = spectral_law({{1.0, 1.0}});
  auto s = sample_counts(spike, 40, 200, 9);
  for (long k : s.k) CHECK(k == 40);

  ProbabilityLaw moments;
  moments.p0 = 0.5;
  CHECK_THROWS_WITH(sample_counts(moments, 10, 10, 1),
                    "sampling needs the spectral measure; build the law with spectral_distribution");

  auto law = spectral_law({{0.3, 0.25}, {0.5, 0.5}, {0.8, 0.25}});
  auto a = sample_counts(law, 100, 1000, 42, 3);
  auto b = sample_counts(law, 100, 1000, 42, 3);
  CHECK(a.k == b.k);
  auto c = sample_counts(law, 100, 1000, 42, 4);
  CHECK(a.k != c.k);

  for (long N : {100L, 10'000L}) {
    auto big = sample_counts(law, N, 100'000, 7);
    auto cl = count_law(law.p0, law.variance, N);
    CHECK(std::abs(big.mean_k - cl.expected_k) < 5 * big.se_mean);
    CHECK(std::abs(big.spread_k - cl.spread_k) < 5 * big.se_spread);
  }
}

TEST_CASE("classical rotation") {
  RotationSpec r{0.7, 0.3, -1.1};
  Matrix3 m = classical_rotation(r);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double d = 0.0;
      for (int k = 0; k < 3; ++k) d += m[i][k] * m[j][k];
      CHECK(d == doctest::Approx(i == j ? 1.0 : 0.0));
    }
  Matrix3 x = classical_rotation({kPi / 2, 0.0, 0.0});
  CHECK(x[1][2] == doctest::Approx(-1.0));
  CHECK(x[2][1] == doctest::Approx(1.0));
}

TEST_CASE("rotation estimates stay near the classical matrix") {
  for (double theta : {0.0, theta_of_n(DeformationParameter(0.99), 34), kPi}) {
    ProtocolConfig cfg;
    cfg.ro = {theta, 0.0, 0.0};
    // phi_g = 3 pi / 2 corresponds to alpha = gamma = 0
    auto est = estimate_rotation(cfg);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        CHECK(est.means[i][j] <= cfg.q + 1e-9);
        CHECK(est.means[i][j] >= -1 / cfg.q - 1e-9);
        CHECK(est.uncertainties[i][j] >= 0.0);
        CHECK(std::abs(est.means[i][j] - est.classical_reference[i][j]) <= 0.05);
        CHECK(est.cells[i][j].p0 >= -1e-12);
        CHECK(est.cells[i][j].p0 <= 1 + 1e-12);
      }
    }
  }
}

TEST_CASE("monte carlo runs are reproducible") {
  ProtocolConfig cfg;
  cfg.ro = {kPi, 0.0, 0.0};
  cfg.mode = ProtocolMode::MonteCarlo;
  cfg.N = 500;
  cfg.trials = 2000;
  cfg.spectral_truncation = 40;
  auto a = estimate_rotation(cfg);
  auto b = estimate_rotation(cfg);
  CHECK(to_json(a).dump() == to_json(b).dump());
  REQUIRE(a.sampled_means);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const auto& c = a.cells[i][j];
      REQUIRE(c.samples);
      CHECK(std::abs(c.samples->mean_k - cfg.N * c.histogram->p0) < 5 * c.samples->se_mean + 1e-9);
    }
}

TEST_CASE("protocol config parsing") {
  auto j = nlohmann::json::parse(R"({"q": 0.99, "N": 100, "mode": "monte_carlo", "seed": 5,
                                     "rotation": {"theta": 1.0, "alpha": 0.5}})");
  auto c = protocol_config_from_json(j);
  CHECK(c.N == 100);
  CHECK(c.mode == ProtocolMode::MonteCarlo);
  CHECK(c.ro.alpha == 0.5);
  CHECK(c.ro.gamma == 0.0);
  auto back = protocol_config_from_json([&] {
    auto o = to_json(c);
    o.erase("rng");
    return o;
  }());
  CHECK(back.seed == 5);

  CHECK_THROWS_WITH(protocol_config_from_json(nlohmann::json::parse(R"({"N": 1})")), "/rotation: missing");
  CHECK_THROWS_WITH(protocol_config_from_json(nlohmann::json::parse(R"({"N": 0, "rotation": {"theta": 0}})")),
                    "/N: expected an integer >= 1");
  CHECK_THROWS_WITH(protocol_config_from_json(nlohmann::json::parse(R"({"rotation": {"theta": "x"}})")),
                    "/rotation/theta: expected a number");
  CHECK_THROWS_WITH(protocol_config_from_json(nlohmann::json::parse(R"({"rotation": {"theta": 0}, "mode": "x"})")),
                    "/mode: expected \"analytic\" or \"monte_carlo\"");
  CHECK_THROWS_WITH(protocol_config_from_json(nlohmann::json::parse(R"({"rotation": {"theta": 0}, "bogus": 1})")),
                    "/bogus: unknown field");
}
