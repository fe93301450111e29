#include "dqm/observables.hpp"

#include <mutex>

namespace dqm {

namespace {

const Laurent kQ = Laurent::q_power(1);
const Laurent kQinv = Laurent::q_power(-1);

}  // namespace

SpinOperatorMatrix SpinOperatorMatrix::identity() {
  SpinOperatorMatrix out;
  out.m[0][0] = AlgebraExpression(1);
  out.m[1][1] = AlgebraExpression(1);
  return out;
}

SpinOperatorMatrix SpinOperatorMatrix::adjoint() const {
  SpinOperatorMatrix out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.m[i][j] = m[j][i].adjoint();
  return out;
}

SpinOperatorMatrix operator*(const SpinOperatorMatrix& a, const SpinOperatorMatrix& b) {
  SpinOperatorMatrix out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j];
  return out;
}

SpinOperatorMatrix operator+(const SpinOperatorMatrix& a, const SpinOperatorMatrix& b) {
  SpinOperatorMatrix out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.m[i][j] = a.m[i][j] + b.m[i][j];
  return out;
}

SpinOperatorMatrix operator-(const SpinOperatorMatrix& a, const SpinOperatorMatrix& b) {
  SpinOperatorMatrix out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.m[i][j] = a.m[i][j] - b.m[i][j];
  return out;
}

SpinOperatorMatrix operator*(const Laurent& s, const SpinOperatorMatrix& a) {
  SpinOperatorMatrix out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.m[i][j] = s * a.m[i][j];
  return out;
}

SpinVector operator*(const SpinOperatorMatrix& a, const SpinVector& v) {
  return {{a.m[0][0] * v.c[0] + a.m[0][1] * v.c[1], a.m[1][0] * v.c[0] + a.m[1][1] * v.c[1]}};
}

SpinVector operator*(const SpinVector& v, const AlgebraExpression& s) {
  return {{v.c[0] * s, v.c[1] * s}};
}

AlgebraExpression inner(const SpinVector& v, const SpinVector& w) {
  return v.c[0].adjoint() * w.c[0] + v.c[1].adjoint() * w.c[1];
}

SpinOperatorMatrix outer(const SpinVector& v, const SpinVector& w) {
  SpinOperatorMatrix out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.m[i][j] = v.c[i] * w.c[j].adjoint();
  return out;
}

SpinOperatorMatrix u_matrix(const std::string& copy) {
  auto g = generators_of(copy);
  SpinOperatorMatrix u;
  u.m[0][0] = g.alpha;
  u.m[0][1] = -(kQ * g.gamma_star);
  u.m[1][0] = g.gamma;
  u.m[1][1] = g.alpha_star;
  return u;
}

PreMeasurementState spin_state(const std::string& copy, Outcome variant) {
  SpinOperatorMatrix u = u_matrix(copy);
  // columns of U are the images of |up> and |down>
  int col = variant == Outcome::Up ? 0 : 1;
  return {{{u.m[0][col], u.m[1][col]}}, variant, copy};
}

SpinOperatorMatrix sigma_z_q() {
  SpinOperatorMatrix s;
  s.m[0][0] = AlgebraExpression(kQ);
  s.m[1][1] = AlgebraExpression(-kQinv);
  return s;
}

SpinOperatorMatrix build_sigma_q(const std::string& copy) {
  auto g = generators_of(copy);
  const Laurent qq = kQ + kQinv;
  AlgebraExpression d = AlgebraExpression(1) - (Laurent(1) + Laurent::q_power(2)) * (g.gamma_star * g.gamma);
  SpinOperatorMatrix s;
  s.m[0][0] = kQ * d;
  s.m[0][1] = qq * (g.alpha * g.gamma_star);
  s.m[1][0] = qq * (g.gamma * g.alpha_star);
  s.m[1][1] = -(kQinv * d);
  return s;
}

SpinOperatorMatrix sigma_by_conjugation(const std::string& copy) {
  SpinOperatorMatrix u = u_matrix(copy);
  return u * sigma_z_q() * u.adjoint();
}

AlgebraExpression q_trace(const SpinOperatorMatrix& m) {
  return m.m[0][0] + Laurent::q_power(2) * m.m[1][1];
}

Projectors build_projectors(const std::string& copy) {
  auto g = generators_of(copy);
  Projectors p;
  p.up.m[0][0] = g.alpha * g.alpha_star;
  p.up.m[0][1] = g.alpha * g.gamma_star;
  p.up.m[1][0] = g.gamma * g.alpha_star;
  p.up.m[1][1] = g.gamma * g.gamma_star;
  p.down.m[0][0] = Laurent::q_power(2) * (g.gamma * g.gamma_star);
  p.down.m[0][1] = -(kQ * (g.gamma_star * g.alpha));
  p.down.m[1][0] = -(kQ * (g.alpha_star * g.gamma));
  p.down.m[1][1] = g.alpha_star * g.alpha;
  return p;
}

Projectors frame_changed_projectors() {
  FrameChange f = frame_change_generators();
  SpinVector up{{f.a, f.c}};
  SpinVector down{{-(kQ * f.c.adjoint()), f.a.adjoint()}};
  return {outer(up, up), outer(down, down)};
}

SpinOperatorMatrix transform_by_frame(const SpinOperatorMatrix& m, const std::string& frame) {
  SpinOperatorMatrix u = u_matrix(frame);
  return u * m * u.adjoint();
}

SpinVector transform_by_frame(const SpinVector& v, const std::string& frame) {
  return u_matrix(frame) * v;
}

ProbabilityPair probability_exprs(Observer observer) {
  // The two-observer expressions are large; build each once.
  static std::once_flag once[2];
  static ProbabilityPair cache[2];
  const int k = observer == Observer::Single ? 0 : 1;
  std::call_once(once[k], [&] {
    const SpinVector psi = spin_state(kSpin).psi;
    Projectors p = build_projectors(kApparatus);
    if (observer == Observer::Two) {
      p.up = transform_by_frame(p.up);
      p.down = transform_by_frame(p.down);
    }
    cache[k].up = inner(psi, p.up * psi);
    cache[k].down = inner(psi, p.down * psi);
  });
  return cache[k];
}

AlgebraExpression expectation_sigma_expr(Observer observer) {
  ProbabilityPair p = probability_exprs(observer);
  return kQ * p.up - kQinv * p.down;
}

PreMeasurementState measurement_update(Outcome outcome, const std::string& apparatus) {
  return spin_state(apparatus, outcome);
}

}  // namespace dqm
