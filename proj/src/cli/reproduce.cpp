#include "dqm/cli.hpp"

#include <cmath>
#include <numbers>

namespace dqm::cli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPrinted = 0.015;  // two printed decimals
constexpr double kDecimal = 0.01;
constexpr double kExact = 1e-10;

void add(std::vector<ReproEntry>& rows, const std::string& group, const std::string& label, double value,
         double printed, double tol) {
  rows.push_back({group, label, value, printed, tol});
}

std::string idx(int i, int j) { return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"; }

void spin_rows(std::vector<ReproEntry>& rows, const std::string& g, const SpinMoments& m,
               std::array<double, 2> mean, std::array<double, 2> spread, double tol, bool spread_is_sd) {
  const char* comp[2] = {"up", "down"};
  for (int i = 0; i < 2; ++i) {
    add(rows, g, std::string("|<psi>| ") + comp[i], std::abs(m.mean[i]), mean[i], tol);
    double v = std::max(m.pati_variance[i], 0.0);
    add(rows, g, std::string("Delta psi ") + comp[i], spread_is_sd ? std::sqrt(v) : v, spread[i], tol);
  }
}

void sigma_rows(std::vector<ReproEntry>& rows, const std::string& g, const MatrixMoments& m,
                const std::array<std::array<double, 2>, 2>& mean, const std::array<std::array<double, 2>, 2>& spread,
                double tol, bool modulus, bool spread_is_sd) {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const std::string at = std::string("(") + char('1' + i) + "," + char('1' + j) + ")";
      const bool diag = i == j;
      double value = modulus && !diag ? std::abs(m.mean[i][j]) : m.mean[i][j].real();
      add(rows, g, "sigma mean " + at, value, mean[i][j], tol);
      double v = std::max(m.pati_variance[i][j], 0.0);
      add(rows, g, std::string(spread_is_sd ? "sigma spread " : "sigma variance ") + at,
          spread_is_sd ? std::sqrt(v) : v, spread[i][j], tol);
    }
  }
}

void probability_rows(std::vector<ReproEntry>& rows, const std::string& g, const ProbabilityLaw& law,
                      double p0, double spread) {
  add(rows, g, "P mean", law.p0, p0, kDecimal);
  add(rows, g, "P spread", law.spread(), spread, kDecimal);
}

}  // namespace

std::vector<ReproEntry> reproduce_peaks(const RunConfig& cfg) {
  DeformationParameter q(cfg.q);
  std::vector<ReproEntry> rows;
  add(rows, "peaks", "argmax mu=7", double(f_peak_level(q, 7.0)), 34.0, 0.0);
  add(rows, "peaks", "argmax mu=17", double(f_peak_level(q, 17.0)), 96.0, 0.0);
  add(rows, "peaks", "theta(34)/(pi/2)", theta_of_n(q, 34L) / (kPi / 2), 1.006, 0.001);
  add(rows, "peaks", "n closest to pi/2", double(n_closest(q, kPi / 2)), 34.0, 0.0);
  add(rows, "peaks", "mu(pi/2)", mu_of_theta(q, kPi / 2), 7.0, 0.0);
  return rows;
}

std::vector<ReproEntry> reproduce_rotation_matrices(const RunConfig& cfg) {
  struct Printed {
    std::string name;
    RotationSpec ro;
    Matrix3 mean, unc;
  };
  const std::vector<Printed> printed{
      {"R(0,0,0)",
       {0.0, 0.0, 0.0},
       {{{0.99, 0.00, -0.03}, {0.00, 0.99, -0.03}, {0.00, 0.00, 0.99}}},
       {{{0.00, 0.14, 0.10}, {0.14, 0.00, 0.10}, {0.10, 0.10, 0.00}}}},
      {"R(1.006 pi/2,3pi/2,0)",
       {1.006 * kPi / 2, 0.0, 0.0},
       {{{0.98, 0.02, 0.00}, {0.00, 0.01, -0.99}, {0.00, 0.97, 0.00}}},
       {{{0.03, 0.17, 0.10}, {0.17, 0.17, 0.02}, {0.14, 0.02, 0.10}}}},
      {"R(pi,3pi/2,0)",
       {kPi, 0.0, 0.0},
       {{{0.98, 0.00, 0.02}, {0.00, -0.98, 0.02}, {0.00, 0.00, -0.97}}},
       {{{0.03, 0.14, 0.17}, {0.14, 0.03, 0.17}, {0.17, 0.17, 0.00}}}},
  };
  std::vector<ReproEntry> rows;
  for (const auto& p : printed) {
    ProtocolConfig pc;
    pc.q = cfg.q;
    pc.ro = p.ro;
    pc.truncation = cfg.trunc();
    RotationEstimate est = estimate_rotation(pc);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) add(rows, p.name, "mean " + idx(i, j), est.means[i][j], p.mean[i][j], kPrinted);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        add(rows, p.name, "uncertainty " + idx(i, j), est.uncertainties[i][j], p.unc[i][j], kPrinted);
  }
  return rows;
}

std::vector<ReproEntry> reproduce_b_examples(const RunConfig& cfg) {
  const DeformationParameter dq(cfg.q);
  const double q = cfg.q;
  const Truncation t = cfg.trunc();
  std::vector<ReproEntry> rows;
  using M2 = std::array<std::array<double, 2>, 2>;
  const M2 zero{};

  {  // both factors in the one-dimensional sector
    FullGeometry g({rho_state(Role::Spin, dq, 0.0, t), rho_state(Role::SternGerlach, dq, 0.0, t)});
    spin_rows(rows, "example 1", spin_state_moments(g), {1.0, 0.0}, {0.0, 0.0}, kExact, false);
    sigma_rows(rows, "example 1", sigma_matrix_moments(g, Observer::Single), M2{{{q, 0.0}, {0.0, -1 / q}}}, zero,
               kExact, false, false);
    add(rows, "example 1", "P mean", probability_moments(g, Outcome::Up, Observer::Single).p0, 1.0, kExact);
  }
  {  // apparatus on the lowest level
    FullGeometry g({rho_state(Role::Spin, dq, 0.0, t), pi_basis_state(Role::SternGerlach, dq, 0, 0.0, 0.0, t)});
    spin_rows(rows, "example 2a", spin_state_moments(g), {1.0, 0.0}, {0.0, 0.0}, kExact, false);
    sigma_rows(rows, "example 2a", sigma_matrix_moments(g, Observer::Single), M2{{{-q * q * q, 0.0}, {0.0, q}}},
               M2{{{0.0, 0.0}, {(1 + q * q) * (1 + q * q) * (1 - q * q), 0.0}}}, kExact, false, false);
  }
  {  // spin on the lowest level
    FullGeometry g({pi_basis_state(Role::Spin, dq, 0, 0.0, 0.0, t), rho_state(Role::SternGerlach, dq, 0.0, t)});
    spin_rows(rows, "example 2b", spin_state_moments(g), {0.0, 1.0}, {0.0, 0.0}, kExact, false);
    sigma_rows(rows, "example 2b", sigma_matrix_moments(g, Observer::Single), M2{{{q, 0.0}, {0.0, -1 / q}}}, zero,
               kExact, false, false);
  }
  {  // both equatorial
    FullGeometry g({direction_state(Role::Spin, dq, kPi / 2, 0.0, t),
                    direction_state(Role::SternGerlach, dq, kPi / 2, 0.0, t)});
    spin_rows(rows, "example 3", spin_state_moments(g), {0.71, 0.71}, {0.04, 0.04}, kDecimal, true);
    sigma_rows(rows, "example 3", sigma_matrix_moments(g, Observer::Single), M2{{{0.0, 0.99}, {0.99, 0.0}}},
               M2{{{0.10, 0.10}, {0.10, 0.10}}}, kDecimal, true, true);
  }
  {  // spin along z, apparatus along x
    FullGeometry g({rho_state(Role::Spin, dq, 0.0, t), direction_state(Role::SternGerlach, dq, kPi / 2, 0.0, t)});
    probability_rows(rows, "example 4", probability_moments(g, Outcome::Up, Observer::Single), 0.50, 0.05);
  }
  {  // second frame rotated about x
    FullGeometry g({direction_state(Role::Spin, dq, kPi / 2, 0.0, t), rho_state(Role::SternGerlach, dq, 0.0, t),
                    rotation_state(dq, kPi / 2, 0.0, 0.0, t)});
    SpinVector psi_b = transform_by_frame(spin_state(kSpin).psi);
    SpinMoments s;
    for (int i = 0; i < 2; ++i) {
      GeometryMoments m = pati_moments(g.product(), psi_b.c[i]);
      s.mean[i] = m.mean;
      s.pati_variance[i] = m.pati_variance;
    }
    const double r = 0.5 * std::sqrt(2.0), d = 0.1 * std::abs(std::sin(0.75 * kPi));
    spin_rows(rows, "example 5", s, {r, r}, {d, d}, kDecimal, true);
    sigma_rows(rows, "example 5", sigma_matrix_moments(g, Observer::Two), M2{{{0.0, 0.99}, {0.99, 0.0}}},
               M2{{{0.10, 0.10}, {0.10, 0.10}}}, kDecimal, true, true);
    probability_rows(rows, "example 5", probability_moments(g, Outcome::Up, Observer::Two), 0.51, 0.04);
  }
  return rows;
}

}  // namespace dqm::cli
