#include "dqm/algebra.hpp"

#include <sstream>

namespace dqm {

namespace {

constexpr int kA = 0, kAs = 1, kG = 2, kGs = 3;

int slot(Gen g) {
  switch (g) {
    case Gen::Alpha: return kA;
    case Gen::AlphaStar: return kAs;
    case Gen::Gamma: return kG;
    case Gen::GammaStar: return kGs;
  }
  return kA;
}

}  // namespace

CommutativePolynomial::CommutativePolynomial(ComplexRational c) { add_term({}, c); }

CommutativePolynomial CommutativePolynomial::variable(const std::string& copy, Gen kind) {
  CommutativePolynomial p;
  Key k;
  k[copy][slot(kind)] = 1;
  p.add_term(k, ComplexRational(1));
  return p;
}

CommutativePolynomial CommutativePolynomial::monomial(Key k, const ComplexRational& c) {
  CommutativePolynomial p;
  p.add_term(k, c);
  return p;
}

void CommutativePolynomial::add_term(Key k, const ComplexRational& c) {
  if (c.is_zero()) return;
  std::erase_if(k, [](const auto& e) { return e.second == std::array<int, 4>{}; });
  auto [it, fresh] = terms_.try_emplace(k, c);
  if (!fresh) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

CommutativePolynomial& CommutativePolynomial::operator+=(const CommutativePolynomial& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

CommutativePolynomial operator-(const CommutativePolynomial& a, const CommutativePolynomial& b) {
  CommutativePolynomial out = a;
  for (const auto& [k, c] : b.terms_) out.add_term(k, -c);
  return out;
}

CommutativePolynomial operator*(const CommutativePolynomial& a, const CommutativePolynomial& b) {
  CommutativePolynomial out;
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      CommutativePolynomial::Key k = ka;
      for (const auto& [copy, e] : kb)
        for (int i = 0; i < 4; ++i) k[copy][i] += e[i];
      out.add_term(k, ca * cb);
    }
  }
  return out;
}

CommutativePolynomial CommutativePolynomial::reduced() const {
  CommutativePolynomial out;
  std::vector<std::pair<Key, ComplexRational>> work(terms_.begin(), terms_.end());
  while (!work.empty()) {
    auto [k, c] = work.back();
    work.pop_back();
    bool done = true;
    for (auto& [copy, e] : k) {
      if (e[kA] > 0 && e[kAs] > 0) {
        // a a* = 1 - g g*
        --e[kA];
        --e[kAs];
        work.emplace_back(k, c);
        ++e[kG];
        ++e[kGs];
        work.emplace_back(k, -c);
        done = false;
        break;
      }
    }
    if (done) out.add_term(k, c);
  }
  return out;
}

CommutativePolynomial classical_limit(const AlgebraExpression& e) {
  CommutativePolynomial out;
  for (const auto& [m, c] : e.terms()) {
    CommutativePolynomial::Key k;
    for (const auto& [copy, w] : m.factors) {
      auto& slots = k[copy];
      slots[kA] = w.alpha > 0 ? w.alpha : 0;
      slots[kAs] = w.alpha < 0 ? -w.alpha : 0;
      slots[kG] = w.gamma;
      slots[kGs] = w.gamma_star;
    }
    out += CommutativePolynomial::monomial(k, c.at_one());
  }
  return out;
}

std::string to_string(const CommutativePolynomial& p) {
  if (p.terms().empty()) return "0";
  static const char* names[] = {"a", "a*", "g", "g*"};
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : p.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << to_string(c) << ")";
    for (const auto& [copy, e] : k)
      for (int i = 0; i < 4; ++i)
        if (e[i] > 0) os << "*" << names[i] << "@" << copy << (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
  }
  return os.str();
}

}  // namespace dqm
