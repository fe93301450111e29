#include "dqm/representation.hpp"

#include <cmath>
#include <numbers>

namespace dqm {

namespace {

const cplx I(0.0, 1.0);

bool valid_angle(double a) { return a >= 0.0 && a < 2.0 * std::numbers::pi; }

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

}  // namespace

void SectorConfig::validate() const {
  if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("sector: q must lie in (0, 1]");
  if (n_max < 1 || buffer < 1) throw std::invalid_argument("sector: need n_max >= 1 and buffer >= 1");
  if (!valid_angle(chi) || (kind == SectorKind::Pi && !valid_angle(phi)))
    throw std::invalid_argument("sector: angles must lie in [0, 2pi)");
  if (copy.empty()) throw std::invalid_argument("sector: empty copy label");
}

SectorState::SectorState(SectorConfig cfg, Vector amplitudes, long losses)
    : cfg_(std::move(cfg)), amp_(std::move(amplitudes)), losses_(losses) {
  cfg_.validate();
  if (amp_.size() != cfg_.dim()) throw std::invalid_argument("sector state: amplitude size mismatch");
  if (!amp_.allFinite()) throw std::invalid_argument("sector state: non-finite amplitude");
}

double SectorState::tail_mass() const {
  if (cfg_.kind == SectorKind::Rho) return 0.0;
  return amp_.tail(cfg_.buffer).squaredNorm();
}

SectorState basis_state(const SectorConfig& cfg, int n) {
  cfg.validate();
  if (n < 0 || n >= cfg.dim()) throw std::invalid_argument("basis_state: level out of range");
  Vector v = Vector::Zero(cfg.dim());
  v(n) = 1.0;
  return SectorState(cfg, v);
}

Vector apply_word(const Word& w, const SectorConfig& cfg, const Vector& v, long* losses) {
  const Eigen::Index d = v.size();
  if (cfg.kind == SectorKind::Rho) {
    if (w.gamma + w.gamma_star > 0) return Vector::Zero(d);
    return std::exp(I * (double(w.alpha) * cfg.chi)) * v;
  }
  const double q = cfg.q;
  Vector out = v;
  if (w.gamma + w.gamma_star > 0) {
    const cplx phase = std::exp(I * (double(w.gamma - w.gamma_star) * cfg.phi));
    const int power = w.gamma + w.gamma_star;
    for (Eigen::Index n = 0; n < d; ++n) out(n) *= phase * std::pow(q, double(n * power));
  }
  const cplx lower = std::exp(I * cfg.chi);
  for (int i = 0; i < w.alpha; ++i) {
    Vector next = Vector::Zero(d);
    for (Eigen::Index n = 1; n < d; ++n) next(n - 1) = lower * std::sqrt(1.0 - std::pow(q, 2.0 * n)) * out(n);
    out.swap(next);
  }
  for (int i = 0; i < -w.alpha; ++i) {
    Vector next = Vector::Zero(d);
    for (Eigen::Index n = 0; n + 1 < d; ++n)
      next(n + 1) = std::conj(lower) * std::sqrt(1.0 - std::pow(q, 2.0 * n + 2.0)) * out(n);
    if (losses && out(d - 1) != cplx(0.0)) ++*losses;
    out.swap(next);
  }
  return out;
}

SectorState apply_generator(const GeneratorSymbol& g, const SectorState& s) {
  if (g.copy != s.config().copy)
    throw std::invalid_argument("generator of copy " + g.copy + " applied to sector of copy " +
                                s.config().copy);
  Word w;
  switch (g.kind) {
    case Gen::Alpha: w.alpha = 1; break;
    case Gen::AlphaStar: w.alpha = -1; break;
    case Gen::Gamma: w.gamma = 1; break;
    case Gen::GammaStar: w.gamma_star = 1; break;
  }
  long losses = s.truncation_losses();
  Vector v = apply_word(w, s.config(), s.amplitudes(), &losses);
  return SectorState(s.config(), std::move(v), losses);
}

SparseMatrix generator_matrix(Gen g, const SectorConfig& cfg) {
  cfg.validate();
  const int d = cfg.dim();
  SparseMatrix m(d, d);
  std::vector<Eigen::Triplet<cplx>> t;
  const double q = cfg.q;
  if (cfg.kind == SectorKind::Rho) {
    if (g == Gen::Alpha) t.emplace_back(0, 0, std::exp(I * cfg.chi));
    if (g == Gen::AlphaStar) t.emplace_back(0, 0, std::exp(-I * cfg.chi));
  } else {
    for (int n = 0; n < d; ++n) {
      switch (g) {
        case Gen::Alpha:
          if (n >= 1) t.emplace_back(n - 1, n, std::exp(I * cfg.chi) * std::sqrt(1.0 - std::pow(q, 2.0 * n)));
          break;
        case Gen::AlphaStar:
          if (n + 1 < d)
            t.emplace_back(n + 1, n, std::exp(-I * cfg.chi) * std::sqrt(1.0 - std::pow(q, 2.0 * n + 2.0)));
          break;
        case Gen::Gamma: t.emplace_back(n, n, std::exp(I * cfg.phi) * std::pow(q, double(n))); break;
        case Gen::GammaStar: t.emplace_back(n, n, std::exp(-I * cfg.phi) * std::pow(q, double(n))); break;
      }
    }
  }
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

RepOperator matrix_of(const AlgebraExpression& e, const SectorConfig& cfg) {
  cfg.validate();
  for (const auto& c : e.copies())
    if (c != cfg.copy) throw std::invalid_argument("matrix_of: expression uses copy " + c);
  const int d = cfg.dim();
  const SparseMatrix a = generator_matrix(Gen::Alpha, cfg);
  const SparseMatrix as = generator_matrix(Gen::AlphaStar, cfg);
  const SparseMatrix g = generator_matrix(Gen::Gamma, cfg);
  const SparseMatrix gs = generator_matrix(Gen::GammaStar, cfg);
  SparseMatrix out(d, d);
  SparseMatrix id(d, d);
  id.setIdentity();
  for (const auto& [m, c] : e.terms()) {
    Word w = m.word(cfg.copy);
    if (cfg.kind == SectorKind::Pi && w.degree() > cfg.buffer)
      throw std::invalid_argument("matrix_of: word degree " + std::to_string(w.degree()) +
                                  " exceeds buffer " + std::to_string(cfg.buffer) +
                                  "; increase the buffer");
    SparseMatrix wm = id;
    for (int i = 0; i < std::abs(w.alpha); ++i) wm = wm * (w.alpha > 0 ? a : as);
    for (int i = 0; i < w.gamma; ++i) wm = wm * g;
    for (int i = 0; i < w.gamma_star; ++i) wm = wm * gs;
    out += c.evaluate(cfg.q) * wm;
  }
  out.prune(cplx(0.0));
  return {cfg, out};
}

RepOperator matrix_of_word(const std::vector<Gen>& word, const SectorConfig& cfg) {
  const int d = cfg.dim();
  SparseMatrix out(d, d);
  out.setIdentity();
  for (Gen g : word) out = out * generator_matrix(g, cfg);
  return {cfg, out};
}

ExpectationEvaluator::ExpectationEvaluator(const ProductState& phi) : phi_(phi), q_(0.0) {
  if (phi.empty()) throw std::invalid_argument("expectation: empty product state");
  for (const auto& [copy, s] : phi) {
    if (copy != s.config().copy) throw std::invalid_argument("expectation: copy label mismatch");
    if (q_ == 0.0) q_ = s.config().q;
    if (s.config().q != q_) throw std::invalid_argument("expectation: factors disagree on q");
    if (!s.is_protected())
      throw UnprotectedState("factor " + copy + " has tail mass " + std::to_string(s.tail_mass()) +
                             " above the protected threshold; increase the truncation");
  }
}

cplx ExpectationEvaluator::word_expectation(const std::string& copy, const Word& w) {
  auto key = std::make_pair(copy, w);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  auto st = phi_.find(copy);
  if (st == phi_.end()) throw std::invalid_argument("expectation: copy " + copy + " not in geometry");
  const Vector& v = st->second.amplitudes();
  cplx value = v.dot(apply_word(w, st->second.config(), v));
  cache_.emplace(key, value);
  return value;
}

cplx ExpectationEvaluator::operator()(const AlgebraExpression& e) {
  cplx total = 0.0;
  for (const auto& [m, c] : e.terms()) {
    cplx t = c.evaluate(q_);
    for (const auto& [copy, w] : m.factors) t *= word_expectation(copy, w);
    // identity factors contribute <psi|psi>
    for (const auto& [copy, s] : phi_) {
      bool present = false;
      for (const auto& f : m.factors) present = present || f.first == copy;
      if (!present) t *= s.amplitudes().squaredNorm();
    }
    total += t;
  }
  return total;
}

cplx tensor_expectation(const ProductState& phi, const AlgebraExpression& e) {
  ExpectationEvaluator ev(phi);
  return ev(e);
}

Vector product_vector(const ProductState& phi, std::size_t max_dim) {
  std::size_t dim = 1;
  for (const auto& [copy, s] : phi) dim *= s.amplitudes().size();
  if (dim > max_dim) throw std::length_error("product space too large for a dense vector");
  Vector out = Vector::Ones(1);
  for (const auto& [copy, s] : phi) out = kron(out, s.amplitudes());
  return out;
}

Vector apply_to_product(const AlgebraExpression& e, const ProductState& phi, std::size_t max_dim) {
  std::size_t dim = 1;
  for (const auto& [copy, s] : phi) dim *= s.amplitudes().size();
  if (dim > max_dim) throw std::length_error("product space too large for a dense vector");
  for (const auto& c : e.copies())
    if (!phi.count(c)) throw std::invalid_argument("apply_to_product: copy " + c + " not in state");
  const double q = phi.begin()->second.config().q;
  Vector out = Vector::Zero(dim);
  for (const auto& [m, c] : e.terms()) {
    Vector t = Vector::Ones(1);
    for (const auto& [copy, s] : phi)
      t = kron(t, apply_word(m.word(copy), s.config(), s.amplitudes()));
    out += c.evaluate(q) * t;
  }
  return out;
}

}  // namespace dqm
