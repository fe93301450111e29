#include "dqm/algebra.hpp"

#include <algorithm>
#include <stdexcept>

namespace dqm {

Gen star(Gen g) {
  switch (g) {
    case Gen::Alpha: return Gen::AlphaStar;
    case Gen::AlphaStar: return Gen::Alpha;
    case Gen::Gamma: return Gen::GammaStar;
    case Gen::GammaStar: return Gen::Gamma;
  }
  return g;
}

int Monomial::degree() const {
  int d = 0;
  for (const auto& [copy, w] : factors) d += w.degree();
  return d;
}

Word Monomial::word(const std::string& copy) const {
  for (const auto& [c, w] : factors)
    if (c == copy) return w;
  return {};
}

const RewriteRules& RewriteRules::standard() {
  static const RewriteRules rules{Laurent::q_power(-1), Laurent::q_power(1), Laurent(1),
                                  Laurent::q_power(2)};
  return rules;
}

namespace {

using CopyPoly = std::map<Word, Laurent>;

void accumulate(CopyPoly& p, const Word& w, const Laurent& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = p.try_emplace(w, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) p.erase(it);
  }
}

// w * g for one generator of the same copy.
void right_multiply(CopyPoly& out, const Word& w, const Laurent& c, Gen g,
                    const RewriteRules& r) {
  switch (g) {
    case Gen::Gamma:
      accumulate(out, {w.alpha, w.gamma + 1, w.gamma_star}, c);
      return;
    case Gen::GammaStar:
      accumulate(out, {w.alpha, w.gamma, w.gamma_star + 1}, c);
      return;
    case Gen::Alpha: {
      Laurent f = c * r.gamma_past_alpha.pow(w.gamma + w.gamma_star);
      if (w.alpha >= 0) {
        accumulate(out, {w.alpha + 1, w.gamma, w.gamma_star}, f);
      } else {
        accumulate(out, {w.alpha + 1, w.gamma, w.gamma_star}, f);
        accumulate(out, {w.alpha + 1, w.gamma + 1, w.gamma_star + 1}, -(f * r.alpha_star_alpha));
      }
      return;
    }
    case Gen::AlphaStar: {
      Laurent f = c * r.gamma_past_alpha_star.pow(w.gamma + w.gamma_star);
      if (w.alpha <= 0) {
        accumulate(out, {w.alpha - 1, w.gamma, w.gamma_star}, f);
      } else {
        accumulate(out, {w.alpha - 1, w.gamma, w.gamma_star}, f);
        accumulate(out, {w.alpha - 1, w.gamma + 1, w.gamma_star + 1}, -(f * r.alpha_alpha_star));
      }
      return;
    }
  }
}

CopyPoly times_generator(const CopyPoly& p, Gen g, const RewriteRules& r) {
  CopyPoly out;
  for (const auto& [w, c] : p) right_multiply(out, w, c, g, r);
  return out;
}

CopyPoly word_product(const Word& lhs, const Word& rhs, const RewriteRules& r) {
  CopyPoly p{{lhs, Laurent(1)}};
  const Gen ag = rhs.alpha >= 0 ? Gen::Alpha : Gen::AlphaStar;
  for (int i = 0; i < std::abs(rhs.alpha); ++i) p = times_generator(p, ag, r);
  for (int i = 0; i < rhs.gamma; ++i) p = times_generator(p, Gen::Gamma, r);
  for (int i = 0; i < rhs.gamma_star; ++i) p = times_generator(p, Gen::GammaStar, r);
  return p;
}

// Tensor the per-copy polynomials and add c * product into `sink`.
template <class Sink>
void expand(const std::vector<std::pair<std::string, CopyPoly>>& parts, std::size_t i,
            Monomial& current, const Laurent& c, Sink&& sink) {
  if (i == parts.size()) {
    sink(current, c);
    return;
  }
  for (const auto& [w, wc] : parts[i].second) {
    bool push = !w.is_identity();
    if (push) current.factors.emplace_back(parts[i].first, w);
    expand(parts, i + 1, current, c * wc, sink);
    if (push) current.factors.pop_back();
  }
}

void check_degree(const Monomial& m) {
  if (m.degree() > kMaxDegree) {
    throw std::length_error("monomial degree " + std::to_string(m.degree()) +
                            " exceeds the guardrail of " + std::to_string(kMaxDegree));
  }
}

}  // namespace

AlgebraExpression::AlgebraExpression(Laurent scalar) {
  if (!scalar.is_zero()) terms_.emplace(Monomial{}, std::move(scalar));
}

AlgebraExpression AlgebraExpression::generator(const std::string& copy, Gen kind) {
  if (copy.empty()) throw std::invalid_argument("empty copy label");
  Word w;
  switch (kind) {
    case Gen::Alpha: w.alpha = 1; break;
    case Gen::AlphaStar: w.alpha = -1; break;
    case Gen::Gamma: w.gamma = 1; break;
    case Gen::GammaStar: w.gamma_star = 1; break;
  }
  return monomial(Monomial{{{copy, w}}}, Laurent(1));
}

AlgebraExpression AlgebraExpression::monomial(Monomial m, Laurent c) {
  std::erase_if(m.factors, [](const auto& f) { return f.second.is_identity(); });
  std::sort(m.factors.begin(), m.factors.end());
  for (std::size_t i = 1; i < m.factors.size(); ++i)
    if (m.factors[i].first == m.factors[i - 1].first)
      throw std::invalid_argument("monomial repeats copy " + m.factors[i].first);
  for (const auto& [copy, w] : m.factors)
    if (w.gamma < 0 || w.gamma_star < 0) throw std::invalid_argument("negative gamma power");
  check_degree(m);
  AlgebraExpression out;
  out.add_term(m, c);
  return out;
}

void AlgebraExpression::add_term(const Monomial& m, const Laurent& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool AlgebraExpression::is_scalar() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.factors.empty());
}

Laurent AlgebraExpression::scalar_part() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Laurent() : it->second;
}

std::set<std::string> AlgebraExpression::copies() const {
  std::set<std::string> out;
  for (const auto& [m, c] : terms_)
    for (const auto& [copy, w] : m.factors) out.insert(copy);
  return out;
}

int AlgebraExpression::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

AlgebraExpression& AlgebraExpression::operator+=(const AlgebraExpression& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

AlgebraExpression& AlgebraExpression::operator-=(const AlgebraExpression& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

AlgebraExpression AlgebraExpression::operator-() const {
  AlgebraExpression out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

AlgebraExpression operator*(const Laurent& s, const AlgebraExpression& e) {
  AlgebraExpression out;
  for (const auto& [m, c] : e.terms_) out.add_term(m, s * c);
  return out;
}

AlgebraExpression operator*(const AlgebraExpression& a, const AlgebraExpression& b) {
  return multiply(a, b, RewriteRules::standard());
}

AlgebraExpression multiply(const AlgebraExpression& lhs, const AlgebraExpression& rhs,
                           const RewriteRules& rules) {
  AlgebraExpression out;
  std::vector<std::pair<std::string, CopyPoly>> parts;
  Monomial current;
  auto sink = [&](const Monomial& m, const Laurent& c) {
    check_degree(m);
    out.add_term(m, c);
  };
  for (const auto& [m1, c1] : lhs.terms_) {
    for (const auto& [m2, c2] : rhs.terms_) {
      parts.clear();
      auto i = m1.factors.begin();
      auto j = m2.factors.begin();
      while (i != m1.factors.end() || j != m2.factors.end()) {
        if (j == m2.factors.end() || (i != m1.factors.end() && i->first < j->first)) {
          parts.emplace_back(i->first, CopyPoly{{i->second, Laurent(1)}});
          ++i;
        } else if (i == m1.factors.end() || j->first < i->first) {
          parts.emplace_back(j->first, CopyPoly{{j->second, Laurent(1)}});
          ++j;
        } else {
          parts.emplace_back(i->first, word_product(i->second, j->second, rules));
          ++i;
          ++j;
        }
      }
      expand(parts, 0, current, c1 * c2, sink);
    }
  }
  return out;
}

AlgebraExpression AlgebraExpression::adjoint(const RewriteRules& rules) const {
  AlgebraExpression out;
  std::vector<std::pair<std::string, CopyPoly>> parts;
  Monomial current;
  auto sink = [&](const Monomial& m, const Laurent& c) { out.add_term(m, c); };
  for (const auto& [m, c] : terms_) {
    parts.clear();
    for (const auto& [copy, w] : m.factors) {
      // (alpha^k gamma^m gamma*^p)* = gamma^p gamma*^m alpha^{-k}
      parts.emplace_back(copy, word_product({0, w.gamma_star, w.gamma}, {-w.alpha, 0, 0}, rules));
    }
    expand(parts, 0, current, c.conj(), sink);
  }
  return out;
}

AlgebraExpression AlgebraExpression::pow(int k) const {
  if (k < 0) {
    if (!is_scalar()) throw std::domain_error("negative power of a non-scalar expression");
    return AlgebraExpression(scalar_part().pow(k));
  }
  AlgebraExpression out(1);
  for (int i = 0; i < k; ++i) out = out * *this;
  return out;
}

CopyGenerators generators_of(const std::string& copy) {
  return {AlgebraExpression::generator(copy, Gen::Alpha),
          AlgebraExpression::generator(copy, Gen::AlphaStar),
          AlgebraExpression::generator(copy, Gen::Gamma),
          AlgebraExpression::generator(copy, Gen::GammaStar)};
}

AlgebraExpression restrict_to_identity(const AlgebraExpression& e, const std::string& copy) {
  AlgebraExpression out;
  for (const auto& [m, c] : e.terms()) {
    Word w = m.word(copy);
    if (w.gamma + w.gamma_star > 0) continue;
    Monomial rest;
    for (const auto& f : m.factors)
      if (f.first != copy) rest.factors.push_back(f);
    out += AlgebraExpression::monomial(rest, c);
  }
  return out;
}

bool VerificationReport::ok() const {
  return std::all_of(residuals.begin(), residuals.end(), [](const Residual& r) { return r.zero(); });
}

void VerificationReport::append(const VerificationReport& o) {
  residuals.insert(residuals.end(), o.residuals.begin(), o.residuals.end());
}

VerificationReport relation_residuals(const std::string& label, const AlgebraExpression& alpha,
                                      const AlgebraExpression& gamma, const RewriteRules& rules) {
  auto mul = [&](const AlgebraExpression& a, const AlgebraExpression& b) {
    return multiply(a, b, rules);
  };
  const AlgebraExpression as = alpha.adjoint(rules);
  const AlgebraExpression gs = gamma.adjoint(rules);
  const Laurent q = Laurent::q_power(1);
  const Laurent one_minus_q2 = Laurent(1) - Laurent::q_power(2);
  VerificationReport r;
  r.residuals.push_back({label + ": alpha gamma - q gamma alpha", mul(alpha, gamma) - q * mul(gamma, alpha)});
  r.residuals.push_back({label + ": alpha gamma* - q gamma* alpha", mul(alpha, gs) - q * mul(gs, alpha)});
  r.residuals.push_back({label + ": gamma gamma* - gamma* gamma", mul(gamma, gs) - mul(gs, gamma)});
  r.residuals.push_back({label + ": gamma* gamma + alpha* alpha - 1", mul(gs, gamma) + mul(as, alpha) - AlgebraExpression(1)});
  r.residuals.push_back({label + ": alpha alpha* - alpha* alpha - (1-q^2) gamma* gamma",
                         mul(alpha, as) - mul(as, alpha) - one_minus_q2 * mul(gs, gamma)});
  return r;
}

VerificationReport verify_defining_relations(const std::string& copy, const RewriteRules& rules) {
  return relation_residuals(copy, AlgebraExpression::generator(copy, Gen::Alpha),
                            AlgebraExpression::generator(copy, Gen::Gamma), rules);
}

VerificationReport verify_copies_commute(const std::string& c1, const std::string& c2,
                                         const RewriteRules& rules) {
  static const char* names[] = {"alpha", "alpha*", "gamma", "gamma*"};
  static const Gen kinds[] = {Gen::Alpha, Gen::AlphaStar, Gen::Gamma, Gen::GammaStar};
  VerificationReport r;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      auto g1 = AlgebraExpression::generator(c1, kinds[i]);
      auto g2 = AlgebraExpression::generator(c2, kinds[j]);
      r.residuals.push_back({std::string("[") + names[i] + "@" + c1 + ", " + names[j] + "@" + c2 + "]",
                             multiply(g1, g2, rules) - multiply(g2, g1, rules)});
    }
  }
  return r;
}

FrameChange frame_change_generators(const std::string& spin, const std::string& apparatus,
                                    const std::string& frame) {
  auto s = generators_of(spin);
  auto a = generators_of(apparatus);
  auto g = generators_of(frame);
  const Laurent q = Laurent::q_power(1);
  return {g.alpha * s.alpha - q * (g.gamma_star * s.gamma),
          g.gamma * s.alpha + g.alpha_star * s.gamma,
          g.alpha * a.alpha - q * (g.gamma_star * a.gamma),
          g.gamma * a.alpha + g.alpha_star * a.gamma};
}

VerificationReport verify_isomorphism(const RewriteRules& rules) {
  FrameChange f = frame_change_generators();
  VerificationReport r = relation_residuals("x',y'", f.x, f.y, rules);
  r.append(relation_residuals("a',c'", f.a, f.c, rules));
  return r;
}

}  // namespace dqm
