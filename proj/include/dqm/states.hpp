#pragma once

#include "dqm/qkernel.hpp"
#include "dqm/representation.hpp"

#include <json.hpp>

#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace dqm {

enum class Role { Spin, SternGerlach, RelativeOrientation };
enum class Form { RhoChi, PiBasis, Semiclassical };

const std::string& copy_of(Role r);
std::string to_string(Role r);
std::string to_string(Form f);

struct Truncation {
  int n_max = 400;
  int buffer = 8;
  // Grow n_max until the discarded tail of a superposition is below 1e-12.
  bool adaptive = false;
};

struct FormParams {
  double chi = 0.0;
  double phi = 0.0;  // PI_BASIS and SEMICLASSICAL
  long n = 0;        // PI_BASIS
  double mu = 0.0;   // SEMICLASSICAL
};

double wrap_angle(double a);

class GeometryState {
 public:
  GeometryState(Role role, Form form, FormParams params, DeformationParameter q, Truncation t = {});

  Role role() const { return role_; }
  Form form() const { return form_; }
  const FormParams& params() const { return params_; }
  double q() const { return q_; }
  const Truncation& truncation() const { return trunc_; }
  const SectorState& backing() const { return backing_; }
  const std::string& copy() const { return copy_of(role_); }
  // Mass of the untruncated superposition beyond n_max, before renormalization.
  double discarded_tail() const { return discarded_; }

 private:
  Role role_;
  Form form_;
  FormParams params_;
  double q_;
  Truncation trunc_;
  double discarded_ = 0.0;
  SectorState backing_;

  static SectorState build(Role, Form, const FormParams&, double q, Truncation&, double& discarded);
};

GeometryState rho_state(Role role, DeformationParameter q, double chi, Truncation t = {});
GeometryState pi_basis_state(Role role, DeformationParameter q, long n, double phi, double chi,
                             Truncation t = {});
GeometryState semiclassical_state(Role role, DeformationParameter q, double mu, double phi,
                                  double chi, Truncation t = {});

// Direction (theta, omega) for a spin or an apparatus.
GeometryState direction_state(Role role, DeformationParameter q, double theta, double omega,
                              Truncation t = {});

// Relative orientation approximating R_z(alpha) R_x(theta) R_z(gamma).
GeometryState rotation_state(DeformationParameter q, double theta, double alpha, double gamma,
                             Truncation t = {});

// (|mu|, omega - arg mu) with the angle wrapped into [0, 2pi).
std::pair<double, double> absorb_complex_mu(std::complex<double> mu, double omega);

class FullGeometry {
 public:
  explicit FullGeometry(std::vector<GeometryState> factors);

  const std::vector<GeometryState>& factors() const { return factors_; }
  const ProductState& product() const { return product_; }
  bool has(Role r) const;
  const GeometryState& factor(Role r) const;
  double q() const { return factors_.front().q(); }

 private:
  std::vector<GeometryState> factors_;
  ProductState product_;
};

nlohmann::json to_json(const GeometryState& s);
// Errors name the offending field, e.g. "/params/mu".
GeometryState geometry_state_from_json(const nlohmann::json& j, const std::string& path = "");

}  // namespace dqm
