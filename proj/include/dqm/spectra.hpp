#pragma once

#include "dqm/observables.hpp"
#include "dqm/states.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dqm {

enum class Provenance { Moments, Spectral };

struct ProbabilityLaw {
  double p0 = 0.0;
  double variance = 0.0;
  // (eigenvalue, weight), sorted by eigenvalue
  std::vector<std::pair<double, double>> histogram;
  Provenance provenance = Provenance::Moments;
  // True when some block was resolved by a Krylov quadrature rather than a
  // full eigendecomposition.
  bool approximate = false;

  double spread() const { return variance > 0 ? std::sqrt(variance) : 0.0; }
};

struct GeometryMoments {
  cplx mean;
  double pati_variance = 0.0;
};

struct MatrixMoments {
  std::array<std::array<cplx, 2>, 2> mean{};
  std::array<std::array<double, 2>, 2> pati_variance{};
};

struct SpinMoments {
  std::array<cplx, 2> mean{};
  std::array<double, 2> pati_variance{};
};

struct ArityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SpectralCapExceeded : std::length_error {
  using std::length_error::length_error;
};

// <O^dagger O> - <O^dagger><O>
GeometryMoments pati_moments(const ProductState& phi, const AlgebraExpression& o);

ProbabilityLaw probability_moments(const FullGeometry& geom, Outcome which, Observer observer);
ProbabilityLaw probability_moments(const ProductState& phi, Outcome which, Observer observer);

// Mean and Pati variance of the scalar <sigma> expression.
GeometryMoments sigma_moments(const FullGeometry& geom, Observer observer);

// Entrywise moments of the deformed Pauli matrix (seen from the second frame
// for Observer::Two).
MatrixMoments sigma_matrix_moments(const FullGeometry& geom, Observer observer);

// Moments of the represented coefficients (x, y) of the spin state.
SpinMoments spin_state_moments(const FullGeometry& geom);

struct SpectralOptions {
  // Levels kept per pi factor; defaults to the per-factor cap.
  std::optional<int> truncation_override;
  int per_factor_cap = 64;
  double cluster_tolerance = 1e-9;
  // Invariant blocks up to this size are diagonalized densely; larger ones
  // get a Gauss quadrature from Lanczos with `krylov_nodes` nodes.
  int dense_block_cap = 256;
  int krylov_nodes = 64;
};

// The geometry restricted to the spectral truncation and renormalized.
ProductState spectral_product_state(const FullGeometry& geom, const SpectralOptions& opt = {});

ProbabilityLaw spectral_distribution(const FullGeometry& geom, Outcome which, Observer observer,
                                     const SpectralOptions& opt = {});

void write_histogram_csv(std::ostream& os, const ProbabilityLaw& law);
nlohmann::json histogram_json(const ProbabilityLaw& law);

struct EigenCheck {
  std::string family;
  std::string label;
  double eigenvalue = 0.0;
  double residual = 0.0;
};

struct EigenReport {
  std::vector<EigenCheck> checks;
  double tolerance = 1e-8;
  bool ok() const;
  double worst() const;
};

EigenReport verify_eigenstate_families(DeformationParameter q, std::pair<int, int> n_range,
                                       const std::vector<double>& mu_samples, Truncation t = {},
                                       double omega = 0.3);

struct VarianceEquivalence {
  double lhs = 0.0;  // Pati variance of <sigma>
  double rhs = 0.0;  // (q + 1/q)^2 times the probability variance
  bool ok(double tol = 1e-8) const { return std::abs(lhs - rhs) < tol; }
};

VarianceEquivalence variance_equivalence_check(const FullGeometry& geom, Observer observer);

}  // namespace dqm
