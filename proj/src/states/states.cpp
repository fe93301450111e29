#include "dqm/states.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dqm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAdaptiveTail = 1e-12;

}  // namespace

const std::string& copy_of(Role r) {
  switch (r) {
    case Role::Spin: return kSpin;
    case Role::SternGerlach: return kApparatus;
    case Role::RelativeOrientation: return kFrame;
  }
  return kSpin;
}

std::string to_string(Role r) {
  switch (r) {
    case Role::Spin: return "spin";
    case Role::SternGerlach: return "stern_gerlach";
    case Role::RelativeOrientation: return "relative_orientation";
  }
  return "";
}

std::string to_string(Form f) {
  switch (f) {
    case Form::RhoChi: return "rho";
    case Form::PiBasis: return "pi_basis";
    case Form::Semiclassical: return "semiclassical";
  }
  return "";
}

double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

GeometryState::GeometryState(Role role, Form form, FormParams params, DeformationParameter q,
                             Truncation t)
    : role_(role),
      form_(form),
      params_(params),
      q_(q.value()),
      trunc_(t),
      backing_(build(role, form, params_, q.value(), trunc_, discarded_)) {}

SectorState GeometryState::build(Role role, Form form, const FormParams& p, double q,
                                 Truncation& t, double& discarded) {
  SectorConfig cfg;
  cfg.q = q;
  cfg.copy = copy_of(role);
  cfg.n_max = t.n_max;
  cfg.buffer = t.buffer;
  cfg.chi = wrap_angle(p.chi);
  cfg.phi = wrap_angle(p.phi);
  discarded = 0.0;
  if (form == Form::RhoChi) {
    cfg.kind = SectorKind::Rho;
    cfg.phi = 0.0;
    return basis_state(cfg, 0);
  }
  cfg.kind = SectorKind::Pi;
  if (form == Form::PiBasis) {
    if (p.n < 0) throw std::invalid_argument("pi-basis level must be non-negative");
    if (p.n >= cfg.n_max) {
      if (!t.adaptive) throw UnprotectedState("pi-basis level beyond the truncation");
      t.n_max = cfg.n_max = static_cast<int>(p.n) + 1;
    }
    return basis_state(cfg, static_cast<int>(p.n));
  }
  if (!(p.mu >= 0.0) || !std::isfinite(p.mu)) throw std::invalid_argument("mu must be finite and >= 0");
  if (q >= 1.0) throw std::invalid_argument("semi-classical states require q < 1");
  if (p.mu == 0.0) return basis_state(cfg, 0);

  // log-amplitudes by the ratio recursion until far below the peak
  DeformationParameter dq(q);
  const double extra = role == Role::SternGerlach ? std::log(q) : 0.0;
  std::vector<double> logs{0.0};
  double peak = 0.0;
  for (long n = 0;; ++n) {
    double next = logs.back() + std::log(f_ratio(dq, p.mu, n)) + extra;
    logs.push_back(next);
    peak = std::max(peak, next);
    if (next < peak - 60.0 && next < logs[logs.size() - 2]) break;
    if (logs.size() > 50'000'000) throw std::runtime_error("semi-classical series did not decay");
  }
  auto mass_beyond = [&](std::size_t n_max) {
    double total = 0.0, tail = 0.0;
    for (std::size_t n = 0; n < logs.size(); ++n) {
      double w = std::exp(2.0 * (logs[n] - peak));
      total += w;
      if (n >= n_max) tail += w;
    }
    return tail / total;
  };
  discarded = mass_beyond(cfg.n_max);
  if (t.adaptive) {
    while (discarded >= kAdaptiveTail) {
      cfg.n_max = static_cast<int>(std::ceil(cfg.n_max * 1.5));
      discarded = mass_beyond(cfg.n_max);
    }
    t.n_max = cfg.n_max;
  } else if (discarded >= kProtectedTail) {
    throw UnprotectedState("semi-classical state loses mass " + std::to_string(discarded) +
                           " beyond n_max = " + std::to_string(cfg.n_max) +
                           "; increase the truncation");
  }
  Vector amp = Vector::Zero(cfg.dim());
  for (int n = 0; n < cfg.n_max && n < static_cast<int>(logs.size()); ++n)
    amp(n) = std::exp(logs[n] - peak);
  amp.normalize();
  return SectorState(cfg, amp);
}

GeometryState rho_state(Role role, DeformationParameter q, double chi, Truncation t) {
  FormParams p;
  p.chi = chi;
  return GeometryState(role, Form::RhoChi, p, q, t);
}

GeometryState pi_basis_state(Role role, DeformationParameter q, long n, double phi, double chi,
                             Truncation t) {
  FormParams p;
  p.n = n;
  p.phi = phi;
  p.chi = chi;
  return GeometryState(role, Form::PiBasis, p, q, t);
}

GeometryState semiclassical_state(Role role, DeformationParameter q, double mu, double phi,
                                  double chi, Truncation t) {
  FormParams p;
  p.mu = mu;
  p.phi = phi;
  p.chi = chi;
  return GeometryState(role, Form::Semiclassical, p, q, t);
}

GeometryState direction_state(Role role, DeformationParameter q, double theta, double omega,
                              Truncation t) {
  if (role == Role::RelativeOrientation)
    throw std::invalid_argument("direction states are for spins and apparatus");
  if (theta < -kAngleTolerance || theta > std::numbers::pi + kAngleTolerance)
    throw std::invalid_argument("theta must lie in [0, pi]");
  if (std::abs(theta) <= kAngleTolerance) return rho_state(role, q, omega, t);
  long n = n_closest(q, std::min(theta, std::numbers::pi));
  if (n == 0) return pi_basis_state(role, q, 0, omega, 0.0, t);
  return semiclassical_state(role, q, mu_of_theta(q, std::min(theta, std::numbers::pi)), omega, 0.0, t);
}

GeometryState rotation_state(DeformationParameter q, double theta, double alpha, double gamma,
                             Truncation t) {
  if (theta < -kAngleTolerance || theta > std::numbers::pi + kAngleTolerance)
    throw std::invalid_argument("theta must lie in [0, pi]");
  const double chi = (alpha + gamma) / 2.0;
  const double phi = 1.5 * std::numbers::pi - (alpha - gamma) / 2.0;
  constexpr Role ro = Role::RelativeOrientation;
  if (std::abs(theta) <= kAngleTolerance) return rho_state(ro, q, chi, t);
  long n = n_closest(q, std::min(theta, std::numbers::pi));
  if (n == 0) return pi_basis_state(ro, q, 0, phi, chi, t);
  return semiclassical_state(ro, q, mu_of_theta(q, std::min(theta, std::numbers::pi)), phi, chi, t);
}

std::pair<double, double> absorb_complex_mu(std::complex<double> mu, double omega) {
  double a = std::abs(mu);
  return {a, wrap_angle(a == 0.0 ? omega : omega - std::arg(mu))};
}

FullGeometry::FullGeometry(std::vector<GeometryState> factors) : factors_(std::move(factors)) {
  if (factors_.empty() || factors_.size() > 3)
    throw std::invalid_argument("a geometry holds one to three factors");
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (factors_[i].role() == factors_[j].role())
        throw std::invalid_argument("geometry repeats the role " + to_string(factors_[i].role()));
    if (factors_[i].q() != factors_[0].q()) throw std::invalid_argument("geometry factors disagree on q");
    product_.emplace(factors_[i].copy(), factors_[i].backing());
  }
}

bool FullGeometry::has(Role r) const {
  for (const auto& f : factors_)
    if (f.role() == r) return true;
  return false;
}

const GeometryState& FullGeometry::factor(Role r) const {
  for (const auto& f : factors_)
    if (f.role() == r) return f;
  throw std::invalid_argument("geometry has no " + to_string(r) + " factor");
}

nlohmann::json to_json(const GeometryState& s) {
  nlohmann::json params;
  params["chi"] = s.params().chi;
  if (s.form() != Form::RhoChi) params["phi"] = s.params().phi;
  if (s.form() == Form::PiBasis) params["n"] = s.params().n;
  if (s.form() == Form::Semiclassical) params["mu"] = s.params().mu;
  return {{"role", to_string(s.role())},
          {"form", to_string(s.form())},
          {"q", s.q()},
          {"params", params},
          {"truncation",
           {{"n_max", s.truncation().n_max},
            {"buffer", s.truncation().buffer},
            {"adaptive", s.truncation().adaptive}}}};
}

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw std::invalid_argument(path + ": " + what);
}

const nlohmann::json& field(const nlohmann::json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) field_error(path.empty() ? "/" : path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) field_error(path + "/" + key, "missing");
  return *it;
}

double number(const nlohmann::json& j, const std::string& key, const std::string& path) {
  const auto& v = field(j, key, path);
  if (!v.is_number()) field_error(path + "/" + key, "expected a number");
  return v.get<double>();
}

}  // namespace

GeometryState geometry_state_from_json(const nlohmann::json& j, const std::string& path) {
  const auto& role_j = field(j, "role", path);
  const auto& form_j = field(j, "form", path);
  if (!role_j.is_string()) field_error(path + "/role", "expected a string");
  if (!form_j.is_string()) field_error(path + "/form", "expected a string");
  Role role;
  const auto rs = role_j.get<std::string>();
  if (rs == "spin") role = Role::Spin;
  else if (rs == "stern_gerlach") role = Role::SternGerlach;
  else if (rs == "relative_orientation") role = Role::RelativeOrientation;
  else field_error(path + "/role", "unknown role '" + rs + "'");
  Form form;
  const auto fs = form_j.get<std::string>();
  if (fs == "rho") form = Form::RhoChi;
  else if (fs == "pi_basis") form = Form::PiBasis;
  else if (fs == "semiclassical") form = Form::Semiclassical;
  else field_error(path + "/form", "unknown form '" + fs + "'");
  double q = number(j, "q", path);
  if (!(q > 0.0 && q <= 1.0)) field_error(path + "/q", "must lie in (0, 1]");
  const auto& pj = field(j, "params", path);
  const std::string pp = path + "/params";
  FormParams p;
  p.chi = number(pj, "chi", pp);
  if (form != Form::RhoChi) p.phi = number(pj, "phi", pp);
  if (form == Form::PiBasis) {
    const auto& n = field(pj, "n", pp);
    if (!n.is_number_integer() || n.get<long>() < 0) field_error(pp + "/n", "expected a non-negative integer");
    p.n = n.get<long>();
  }
  if (form == Form::Semiclassical) {
    p.mu = number(pj, "mu", pp);
    if (p.mu < 0) field_error(pp + "/mu", "must be non-negative");
  }
  Truncation t;
  if (j.contains("truncation")) {
    const auto& tj = j["truncation"];
    const std::string tp = path + "/truncation";
    if (!tj.is_object()) field_error(tp, "expected an object");
    if (tj.contains("n_max")) {
      if (!tj["n_max"].is_number_integer() || tj["n_max"].get<int>() < 1) field_error(tp + "/n_max", "expected an integer >= 1");
      t.n_max = tj["n_max"].get<int>();
    }
    if (tj.contains("buffer")) {
      if (!tj["buffer"].is_number_integer() || tj["buffer"].get<int>() < 1) field_error(tp + "/buffer", "expected an integer >= 1");
      t.buffer = tj["buffer"].get<int>();
    }
    if (tj.contains("adaptive")) {
      if (!tj["adaptive"].is_boolean()) field_error(tp + "/adaptive", "expected a boolean");
      t.adaptive = tj["adaptive"].get<bool>();
    }
  }
  return GeometryState(role, form, p, DeformationParameter(q), t);
}

}  // namespace dqm
