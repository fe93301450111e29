#pragma once

#include "dqm/algebra.hpp"

#include <array>
#include <string>

namespace dqm {

enum class Observer { Single, Two };
enum class Outcome { Up, Down };

struct SpinVector {
  std::array<AlgebraExpression, 2> c;  // coefficients of up, down
};

struct SpinOperatorMatrix {
  std::array<std::array<AlgebraExpression, 2>, 2> m;

  static SpinOperatorMatrix identity();
  SpinOperatorMatrix adjoint() const;  // (M^dagger)_{ij} = (M_{ji})*
  bool self_adjoint() const { return adjoint() == *this; }
  friend bool operator==(const SpinOperatorMatrix& a, const SpinOperatorMatrix& b) { return a.m == b.m; }
};

SpinOperatorMatrix operator*(const SpinOperatorMatrix& a, const SpinOperatorMatrix& b);
SpinOperatorMatrix operator+(const SpinOperatorMatrix& a, const SpinOperatorMatrix& b);
SpinOperatorMatrix operator-(const SpinOperatorMatrix& a, const SpinOperatorMatrix& b);
SpinOperatorMatrix operator*(const Laurent& s, const SpinOperatorMatrix& a);
SpinVector operator*(const SpinOperatorMatrix& a, const SpinVector& v);
SpinVector operator*(const SpinVector& v, const AlgebraExpression& s);
// sum_i v_i* w_i
AlgebraExpression inner(const SpinVector& v, const SpinVector& w);
// M_ij = v_i w_j*
SpinOperatorMatrix outer(const SpinVector& v, const SpinVector& w);

struct PreMeasurementState {
  SpinVector psi;
  Outcome variant = Outcome::Up;
  std::string copy;
};

// U^q = [[alpha, -q gamma*], [gamma, alpha*]] over one copy.
SpinOperatorMatrix u_matrix(const std::string& copy);

// U^q |up> (variant Up) or U^q |down> (variant Down) over one copy.
PreMeasurementState spin_state(const std::string& copy = kSpin, Outcome variant = Outcome::Up);

// diag(q, -1/q)
SpinOperatorMatrix sigma_z_q();

// Deformed Pauli matrix in closed form over the apparatus copy.
SpinOperatorMatrix build_sigma_q(const std::string& copy = kApparatus);

// U sigma_z^q U^dagger, the defining conjugation.
SpinOperatorMatrix sigma_by_conjugation(const std::string& copy = kApparatus);

// sum_i q^{2i} M_ii with the up row at i = 0.
AlgebraExpression q_trace(const SpinOperatorMatrix& m);

struct Projectors {
  SpinOperatorMatrix up, down;
};

// Closed-form projectors over the apparatus copy.
Projectors build_projectors(const std::string& copy = kApparatus);

// Projectors written with the frame-changed apparatus generators a', c'.
Projectors frame_changed_projectors();

// U_g M U_g^dagger with U_g over the frame copy.
SpinOperatorMatrix transform_by_frame(const SpinOperatorMatrix& m, const std::string& frame = kFrame);
SpinVector transform_by_frame(const SpinVector& v, const std::string& frame = kFrame);

struct ProbabilityPair {
  AlgebraExpression up, down;
};

// <psi|Pi|psi> with psi over copy S and Pi over copy A, or the projectors
// seen from the second frame (copy G) for Observer::Two.
ProbabilityPair probability_exprs(Observer observer);

// q P_up - q^{-1} P_down
AlgebraExpression expectation_sigma_expr(Observer observer);

// The apparatus copy becomes the new spin copy.
PreMeasurementState measurement_update(Outcome outcome, const std::string& apparatus = kApparatus);

}  // namespace dqm
