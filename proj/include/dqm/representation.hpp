#pragma once

#include "dqm/algebra.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dqm {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;

enum class SectorKind { Pi, Rho };

inline constexpr double kProtectedTail = 1e-10;

struct SectorConfig {
  double q = 0.99;
  SectorKind kind = SectorKind::Pi;
  double phi = 0.0;
  double chi = 0.0;
  int n_max = 400;
  int buffer = 8;
  std::string copy = kSpin;

  int dim() const { return kind == SectorKind::Pi ? n_max + buffer : 1; }
  // Throws std::invalid_argument on a bad configuration.
  void validate() const;
};

struct UnprotectedState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class SectorState {
 public:
  SectorState(SectorConfig cfg, Vector amplitudes, long losses = 0);

  const SectorConfig& config() const { return cfg_; }
  const Vector& amplitudes() const { return amp_; }
  // Raising steps that fell off the top level so far.
  long truncation_losses() const { return losses_; }

  double norm() const { return amp_.norm(); }
  // Squared amplitude mass on levels >= n_max.
  double tail_mass() const;
  bool is_protected() const { return tail_mass() < kProtectedTail; }

 private:
  SectorConfig cfg_;
  Vector amp_;
  long losses_;
};

SectorState basis_state(const SectorConfig& cfg, int n = 0);

SectorState apply_generator(const GeneratorSymbol& g, const SectorState& s);

// alpha^k gamma^m gamma*^p applied to an amplitude vector; returns the number
// of truncated raising steps through `losses`.
Vector apply_word(const Word& w, const SectorConfig& cfg, const Vector& v, long* losses = nullptr);

SparseMatrix generator_matrix(Gen g, const SectorConfig& cfg);

struct RepOperator {
  SectorConfig config;
  SparseMatrix matrix;
};

// Single-copy expression as a sparse matrix at numeric q.
RepOperator matrix_of(const AlgebraExpression& e, const SectorConfig& cfg);

// Product of generator matrices, no normal ordering.
RepOperator matrix_of_word(const std::vector<Gen>& word, const SectorConfig& cfg);

// Tensor product of sector states keyed by copy label.
using ProductState = std::map<std::string, SectorState>;

// <Phi| e |Phi> with factor-wise caching of word expectations.
class ExpectationEvaluator {
 public:
  explicit ExpectationEvaluator(const ProductState& phi);
  cplx operator()(const AlgebraExpression& e);
  double q() const { return q_; }

 private:
  cplx word_expectation(const std::string& copy, const Word& w);
  const ProductState& phi_;
  double q_;
  std::map<std::pair<std::string, Word>, cplx> cache_;
};

cplx tensor_expectation(const ProductState& phi, const AlgebraExpression& e);

// e|Phi> as a dense vector over the product basis (copies in label order,
// last copy fastest). Guarded by a total dimension limit.
Vector apply_to_product(const AlgebraExpression& e, const ProductState& phi,
                        std::size_t max_dim = 8'000'000);

Vector product_vector(const ProductState& phi, std::size_t max_dim = 8'000'000);

}  // namespace dqm
