#include "dqm/protocol.hpp"

#include "dqm/philox.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <stdexcept>

namespace dqm {

namespace {

void require_probability(double p0) {
  if (!(p0 >= -1e-12 && p0 <= 1.0 + 1e-12)) throw std::invalid_argument("p0 must lie in [0, 1]");
}

}  // namespace

std::pair<double, double> classical_baseline(double p0, long N) {
  require_probability(p0);
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  p0 = std::clamp(p0, 0.0, 1.0);
  return {2.0 * p0 - 1.0, 2.0 * std::sqrt(p0 * (1.0 - p0) / double(N))};
}

CountLaw count_law(double p0, double variance_f, long N) {
  require_probability(p0);
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (variance_f < 0) throw std::invalid_argument("variance_f must be >= 0");
  p0 = std::clamp(p0, 0.0, 1.0);
  const double n = double(N);
  return {N, n * p0, std::sqrt(n * (n - 1.0) * variance_f + n * p0 * (1.0 - p0))};
}

std::pair<double, double> measured_sigma_law(double p0, double variance_f, long N, double q) {
  CountLaw c = count_law(p0, variance_f, N);
  const double k = q + 1.0 / q, n = double(N);
  return {(k * c.expected_k - n / q) / n, k * c.spread_k / n};
}

SampleSet sample_counts(const ProbabilityLaw& law, long N, long trials, std::uint64_t seed,
                        std::uint64_t stream) {
  if (law.provenance != Provenance::Spectral || law.histogram.empty())
    throw std::invalid_argument(
        "sampling needs the spectral measure; build the law with spectral_distribution");
  if (N < 1 || trials < 1) throw std::invalid_argument("N and trials must be >= 1");

  std::vector<double> cdf;
  std::vector<double> ps;
  double acc = 0.0;
  for (const auto& [p, w] : law.histogram) {
    acc += w;
    cdf.push_back(acc);
    ps.push_back(std::clamp(p, 0.0, 1.0));
  }

  Philox4x32 rng(seed, stream);
  std::uniform_real_distribution<double> unif(0.0, acc);
  SampleSet out;
  out.k.reserve(trials);
  for (long t = 0; t < trials; ++t) {
    const double u = unif(rng);
    std::size_t i = std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    if (i == cdf.size()) i = cdf.size() - 1;
    std::binomial_distribution<long> bin(N, ps[i]);
    out.k.push_back(bin(rng));
  }

  const double T = double(trials);
  double m = 0.0;
  for (long k : out.k) m += double(k);
  m /= T;
  double m2 = 0.0, m4 = 0.0;
  for (long k : out.k) {
    const double d = double(k) - m;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= T;
  m4 /= T;
  out.mean_k = m;
  out.spread_k = std::sqrt(m2);
  out.se_mean = std::sqrt(m2 / T);
  // delta method on the sample variance
  out.se_spread = m2 > 0 ? std::sqrt(std::max(m4 - m2 * m2, 0.0) / T) / (2.0 * out.spread_k) : 0.0;
  return out;
}

void ProtocolConfig::validate() const {
  if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("q must lie in (0, 1]");
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (ro.theta < 0.0 || ro.theta > std::numbers::pi + kAngleTolerance)
    throw std::invalid_argument("rotation theta must lie in [0, pi]");
  if (spectral_truncation < 1) throw std::invalid_argument("spectral truncation must be >= 1");
}

GeometryState axis_state(Role role, int axis, DeformationParameter q, Truncation t) {
  constexpr double half_pi = std::numbers::pi / 2;
  switch (axis) {
    case 0: return direction_state(role, q, half_pi, 0.0, t);
    case 1: return direction_state(role, q, half_pi, half_pi, t);
    case 2: return direction_state(role, q, 0.0, 0.0, t);
  }
  throw std::invalid_argument("axis must be 0, 1 or 2");
}

Matrix3 classical_rotation(const RotationSpec& r) {
  auto rz = [](double a) {
    Matrix3 m{};
    m[0] = {std::cos(a), -std::sin(a), 0.0};
    m[1] = {std::sin(a), std::cos(a), 0.0};
    m[2] = {0.0, 0.0, 1.0};
    return m;
  };
  Matrix3 rx{};
  rx[0] = {1.0, 0.0, 0.0};
  rx[1] = {0.0, std::cos(r.theta), -std::sin(r.theta)};
  rx[2] = {0.0, std::sin(r.theta), std::cos(r.theta)};
  auto mul = [](const Matrix3& a, const Matrix3& b) {
    Matrix3 c{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
  };
  return mul(mul(rz(r.alpha), rx), rz(r.gamma));
}

RotationEstimate estimate_rotation(const ProtocolConfig& cfg) {
  cfg.validate();
  const DeformationParameter q(cfg.q);
  const GeometryState ro = rotation_state(q, cfg.ro.theta, cfg.ro.alpha, cfg.ro.gamma, cfg.truncation);
  std::array<std::optional<GeometryState>, 3> spin, sg;
  for (int a = 0; a < 3; ++a) {
    spin[a] = axis_state(Role::Spin, a, q, cfg.truncation);
    sg[a] = axis_state(Role::SternGerlach, a, q, cfg.truncation);
  }
  // force the shared symbolic expressions before fanning out
  (void)probability_exprs(Observer::Two);

  struct CellOut {
    GeometryMoments sigma;
    CellResult cell;
  };
  auto run_cell = [&](int i, int j) {
    FullGeometry g({*spin[i], *sg[j], ro});
    CellOut out;
    out.sigma = sigma_moments(g, Observer::Two);
    ProbabilityLaw law = probability_moments(g, Outcome::Up, Observer::Two);
    out.cell.p0 = law.p0;
    out.cell.variance_f = std::max(law.variance, 0.0);
    if (cfg.mode == ProtocolMode::MonteCarlo) {
      SpectralOptions opt;
      opt.truncation_override = cfg.spectral_truncation;
      opt.per_factor_cap = std::max(opt.per_factor_cap, cfg.spectral_truncation);
      out.cell.histogram = spectral_distribution(g, Outcome::Up, Observer::Two, opt);
      out.cell.samples = sample_counts(*out.cell.histogram, cfg.N, cfg.trials, cfg.seed,
                                       static_cast<std::uint64_t>(3 * i + j));
    }
    return out;
  };

  std::vector<std::future<CellOut>> jobs;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) jobs.push_back(std::async(std::launch::async, run_cell, i, j));

  RotationEstimate est;
  est.config = cfg;
  est.classical_reference = classical_rotation(cfg.ro);
  const double kq = cfg.q + 1.0 / cfg.q;
  if (cfg.mode == ProtocolMode::MonteCarlo) est.sampled_means.emplace(), est.sampled_spreads.emplace();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CellOut c = jobs[3 * i + j].get();
      est.means[i][j] = c.sigma.mean.real();
      est.uncertainties[i][j] = std::sqrt(std::max(c.sigma.pati_variance, 0.0));
      if (c.cell.samples) {
        const double n = double(cfg.N);
        (*est.sampled_means)[i][j] = (kq * c.cell.samples->mean_k - n / cfg.q) / n;
        (*est.sampled_spreads)[i][j] = kq * c.cell.samples->spread_k / n;
      }
      est.cells[i][j] = std::move(c.cell);
    }
  }
  return est;
}

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw std::invalid_argument(path + ": " + what);
}

double number_at(const nlohmann::json& j, const std::string& key, const std::string& path, double fallback,
                 bool required = false) {
  if (!j.contains(key)) {
    if (required) field_error(path + "/" + key, "missing");
    return fallback;
  }
  if (!j[key].is_number()) field_error(path + "/" + key, "expected a number");
  return j[key].get<double>();
}

long integer_at(const nlohmann::json& j, const std::string& key, const std::string& path, long fallback,
                long min) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer() || j[key].get<long>() < min)
    field_error(path + "/" + key, "expected an integer >= " + std::to_string(min));
  return j[key].get<long>();
}

nlohmann::json matrix_json(const Matrix3& m) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : m) out.push_back(row);
  return out;
}

}  // namespace

ProtocolConfig protocol_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) field_error("/", "expected an object");
  static const std::vector<std::string> known{"q", "N", "trials", "seed", "mode", "rotation", "truncation",
                                              "spectral_truncation"};
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) field_error("/" + k, "unknown field");
  ProtocolConfig c;
  c.q = number_at(j, "q", "", c.q);
  if (!(c.q > 0.0 && c.q <= 1.0)) field_error("/q", "must lie in (0, 1]");
  c.N = integer_at(j, "N", "", c.N, 1);
  c.trials = integer_at(j, "trials", "", c.trials, 1);
  c.seed = static_cast<std::uint64_t>(integer_at(j, "seed", "", static_cast<long>(c.seed), 0));
  if (j.contains("mode")) {
    const auto& m = j["mode"];
    if (m == "analytic") c.mode = ProtocolMode::Analytic;
    else if (m == "monte_carlo") c.mode = ProtocolMode::MonteCarlo;
    else field_error("/mode", "expected \"analytic\" or \"monte_carlo\"");
  }
  if (!j.contains("rotation")) field_error("/rotation", "missing");
  const auto& r = j["rotation"];
  if (!r.is_object()) field_error("/rotation", "expected an object");
  c.ro.theta = number_at(r, "theta", "/rotation", 0.0, true);
  c.ro.alpha = number_at(r, "alpha", "/rotation", 0.0);
  c.ro.gamma = number_at(r, "gamma", "/rotation", 0.0);
  if (c.ro.theta < 0.0 || c.ro.theta > std::numbers::pi + kAngleTolerance)
    field_error("/rotation/theta", "must lie in [0, pi]");
  if (j.contains("truncation")) {
    const auto& t = j["truncation"];
    if (!t.is_object()) field_error("/truncation", "expected an object");
    c.truncation.n_max = static_cast<int>(integer_at(t, "n_max", "/truncation", c.truncation.n_max, 1));
    c.truncation.buffer = static_cast<int>(integer_at(t, "buffer", "/truncation", c.truncation.buffer, 1));
  }
  c.spectral_truncation = static_cast<int>(integer_at(j, "spectral_truncation", "", c.spectral_truncation, 1));
  return c;
}

nlohmann::json to_json(const ProtocolConfig& c) {
  return {{"q", c.q},
          {"N", c.N},
          {"trials", c.trials},
          {"seed", c.seed},
          {"mode", c.mode == ProtocolMode::Analytic ? "analytic" : "monte_carlo"},
          {"rotation", {{"theta", c.ro.theta}, {"alpha", c.ro.alpha}, {"gamma", c.ro.gamma}}},
          {"truncation", {{"n_max", c.truncation.n_max}, {"buffer", c.truncation.buffer}}},
          {"spectral_truncation", c.spectral_truncation},
          {"rng", "philox4x32-10"}};
}

nlohmann::json to_json(const RotationEstimate& est, const std::array<std::array<std::string, 3>, 3>* refs) {
  nlohmann::json cells = nlohmann::json::object();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const CellResult& c = est.cells[i][j];
      nlohmann::json cell{{"p0", c.p0}, {"variance_f", c.variance_f}};
      cell["histogram_ref"] = refs && !(*refs)[i][j].empty() ? nlohmann::json((*refs)[i][j]) : nlohmann::json();
      if (c.histogram) cell["histogram_approximate"] = c.histogram->approximate;
      if (c.samples) {
        cell["sampled_mean_k"] = c.samples->mean_k;
        cell["sampled_spread_k"] = c.samples->spread_k;
      }
      cells[kAxisLabels[i] + "," + kAxisLabels[j]] = cell;
    }
  }
  nlohmann::json out{{"config", to_json(est.config)},
                     {"axes", kAxisLabels},
                     {"means", matrix_json(est.means)},
                     {"uncertainties", matrix_json(est.uncertainties)},
                     {"classical_reference", matrix_json(est.classical_reference)},
                     {"per_cell", cells}};
  if (est.sampled_means) {
    out["sampled_means"] = matrix_json(*est.sampled_means);
    out["sampled_spreads"] = matrix_json(*est.sampled_spreads);
  }
  return out;
}

void write_csv(std::ostream& os, const RotationEstimate& est) {
  os.precision(17);
  os << "row,col,mean,uncertainty,classical,p0,variance_f";
  if (est.sampled_means) os << ",sampled_mean,sampled_spread";
  os << '\n';
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const CellResult& c = est.cells[i][j];
      os << kAxisLabels[i] << ',' << kAxisLabels[j] << ',' << est.means[i][j] << ',' << est.uncertainties[i][j]
         << ',' << est.classical_reference[i][j] << ',' << c.p0 << ',' << c.variance_f;
      if (est.sampled_means) os << ',' << (*est.sampled_means)[i][j] << ',' << (*est.sampled_spreads)[i][j];
      os << '\n';
    }
  }
}

}  // namespace dqm
