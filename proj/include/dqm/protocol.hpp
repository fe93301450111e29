#pragma once

#include "dqm/spectra.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace dqm {

// (2 p0 - 1, 2 sqrt(p0 (1 - p0) / N))
std::pair<double, double> classical_baseline(double p0, long N);

struct CountLaw {
  long N = 0;
  double expected_k = 0.0;
  double spread_k = 0.0;
};

// E[k] = N p0, Delta[k] = sqrt(N (N-1) var_f + N p0 (1 - p0))
CountLaw count_law(double p0, double variance_f, long N);

// Mean and spread of the measured spin ((q + 1/q) k - N/q) / N.
std::pair<double, double> measured_sigma_law(double p0, double variance_f, long N, double q);

struct SampleSet {
  std::vector<long> k;
  double mean_k = 0.0;
  double spread_k = 0.0;
  // standard errors of the two estimates
  double se_mean = 0.0;
  double se_spread = 0.0;
};

// Draws p from the spectral histogram, then k ~ Binomial(N, p), once per
// trial. `stream` separates independent cells under one seed.
SampleSet sample_counts(const ProbabilityLaw& law, long N, long trials, std::uint64_t seed,
                        std::uint64_t stream = 0);

enum class ProtocolMode { Analytic, MonteCarlo };

struct RotationSpec {
  double theta = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
};

struct ProtocolConfig {
  double q = 0.99;
  long N = 1000;
  long trials = 1000;
  RotationSpec ro;
  std::uint64_t seed = 1;
  ProtocolMode mode = ProtocolMode::Analytic;
  Truncation truncation;
  // levels per factor for the sampling histograms
  int spectral_truncation = 48;

  void validate() const;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

inline const std::array<std::string, 3> kAxisLabels{"x_q", "y_q", "z_q"};

struct CellResult {
  double p0 = 0.0;
  double variance_f = 0.0;
  std::optional<ProbabilityLaw> histogram;  // Monte-Carlo mode only
  std::optional<SampleSet> samples;
};

struct RotationEstimate {
  ProtocolConfig config;
  Matrix3 means{};
  Matrix3 uncertainties{};
  Matrix3 classical_reference{};
  std::array<std::array<CellResult, 3>, 3> cells;
  // Monte-Carlo estimates of the measured spin per cell
  std::optional<Matrix3> sampled_means, sampled_spreads;
};

// Spin and apparatus along axis i (0 = x, 1 = y, 2 = z) at the working point.
GeometryState axis_state(Role role, int axis, DeformationParameter q, Truncation t = {});

// R_z(alpha) R_x(theta) R_z(gamma)
Matrix3 classical_rotation(const RotationSpec& r);

RotationEstimate estimate_rotation(const ProtocolConfig& cfg);

ProtocolConfig protocol_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ProtocolConfig& cfg);

// `histogram_refs[i][j]` names the histogram file written for cell (i, j), if any.
nlohmann::json to_json(const RotationEstimate& est,
                       const std::array<std::array<std::string, 3>, 3>* histogram_refs = nullptr);
void write_csv(std::ostream& os, const RotationEstimate& est);

}  // namespace dqm
