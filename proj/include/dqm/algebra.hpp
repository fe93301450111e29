#pragma once

#include "dqm/laurent.hpp"

#include <array>
#include <compare>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace dqm {

// Default copy labels: spin, apparatus, relative orientation.
inline const std::string kSpin = "S";
inline const std::string kApparatus = "A";
inline const std::string kFrame = "G";

enum class Gen { Alpha, AlphaStar, Gamma, GammaStar };

struct GeneratorSymbol {
  std::string copy;
  Gen kind;
};

Gen star(Gen g);

// alpha^k gamma^m gamma*^p; k < 0 stands for alpha*^|k|.
struct Word {
  int alpha = 0;
  int gamma = 0;
  int gamma_star = 0;

  bool is_identity() const { return alpha == 0 && gamma == 0 && gamma_star == 0; }
  int degree() const { return (alpha < 0 ? -alpha : alpha) + gamma + gamma_star; }
  auto operator<=>(const Word&) const = default;
};

// Per-copy words, sorted by copy label, identity words omitted.
struct Monomial {
  std::vector<std::pair<std::string, Word>> factors;

  int degree() const;
  Word word(const std::string& copy) const;
  auto operator<=>(const Monomial&) const = default;
};

inline constexpr int kMaxDegree = 64;

// Reordering data. The standard rules follow from the defining relations;
// tests build deliberately broken ones as negative controls.
struct RewriteRules {
  Laurent gamma_past_alpha;       // gamma alpha = c alpha gamma (also gamma*)
  Laurent gamma_past_alpha_star;  // gamma alpha* = c alpha* gamma (also gamma*)
  Laurent alpha_star_alpha;       // alpha* alpha = 1 - c gamma gamma*
  Laurent alpha_alpha_star;       // alpha alpha* = 1 - c gamma gamma*

  static const RewriteRules& standard();
};

class AlgebraExpression {
 public:
  AlgebraExpression() = default;
  AlgebraExpression(Laurent scalar);
  AlgebraExpression(long scalar) : AlgebraExpression(Laurent(scalar)) {}

  static AlgebraExpression generator(const std::string& copy, Gen kind);
  static AlgebraExpression generator(const GeneratorSymbol& g) { return generator(g.copy, g.kind); }
  static AlgebraExpression monomial(Monomial m, Laurent c);
  static AlgebraExpression q_power(int e) { return AlgebraExpression(Laurent::q_power(e)); }

  const std::map<Monomial, Laurent>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  bool is_scalar() const;
  Laurent scalar_part() const;
  std::set<std::string> copies() const;
  int degree() const;

  AlgebraExpression adjoint(const RewriteRules& rules = RewriteRules::standard()) const;

  AlgebraExpression& operator+=(const AlgebraExpression& o);
  AlgebraExpression& operator-=(const AlgebraExpression& o);
  friend AlgebraExpression operator+(AlgebraExpression a, const AlgebraExpression& b) { return a += b; }
  friend AlgebraExpression operator-(AlgebraExpression a, const AlgebraExpression& b) { return a -= b; }
  AlgebraExpression operator-() const;
  friend AlgebraExpression operator*(const AlgebraExpression& a, const AlgebraExpression& b);
  friend AlgebraExpression operator*(const Laurent& c, const AlgebraExpression& e);
  friend bool operator==(const AlgebraExpression& a, const AlgebraExpression& b) {
    return a.terms_ == b.terms_;
  }

  AlgebraExpression pow(int k) const;

 private:
  void add_term(const Monomial& m, const Laurent& c);
  std::map<Monomial, Laurent> terms_;

  friend AlgebraExpression multiply(const AlgebraExpression&, const AlgebraExpression&,
                                    const RewriteRules&);
};

AlgebraExpression multiply(const AlgebraExpression& lhs, const AlgebraExpression& rhs,
                           const RewriteRules& rules = RewriteRules::standard());

inline AlgebraExpression adjoint(const AlgebraExpression& e) { return e.adjoint(); }

// Generators of one copy, for brevity at call sites.
struct CopyGenerators {
  AlgebraExpression alpha, alpha_star, gamma, gamma_star;
};
CopyGenerators generators_of(const std::string& copy);

// Replaces the generators of one copy by the one-dimensional character with
// alpha = alpha* = 1 and gamma = gamma* = 0 (the identity frame).
AlgebraExpression restrict_to_identity(const AlgebraExpression& e, const std::string& copy);

struct Residual {
  std::string name;
  AlgebraExpression value;
  bool zero() const { return value.is_zero(); }
};

struct VerificationReport {
  std::vector<Residual> residuals;
  bool ok() const;
  void append(const VerificationReport& o);
};

// The five defining relations of one pair (alpha, gamma) of expressions.
VerificationReport relation_residuals(const std::string& label, const AlgebraExpression& alpha,
                                      const AlgebraExpression& gamma,
                                      const RewriteRules& rules = RewriteRules::standard());

VerificationReport verify_defining_relations(const std::string& copy,
                                             const RewriteRules& rules = RewriteRules::standard());

// Commutators between generators of two different copies.
VerificationReport verify_copies_commute(const std::string& c1, const std::string& c2,
                                         const RewriteRules& rules = RewriteRules::standard());

struct FrameChange {
  AlgebraExpression x, y, a, c;
};

// Primed generators obtained by the frame matrix of copy `frame`.
FrameChange frame_change_generators(const std::string& spin = kSpin,
                                    const std::string& apparatus = kApparatus,
                                    const std::string& frame = kFrame);

VerificationReport verify_isomorphism(const RewriteRules& rules = RewriteRules::standard());

// Commutative image at q = 1.
class CommutativePolynomial {
 public:
  // exponents of (a, a*, g, g*) per copy
  using Key = std::map<std::string, std::array<int, 4>>;

  CommutativePolynomial() = default;
  CommutativePolynomial(ComplexRational c);
  static CommutativePolynomial variable(const std::string& copy, Gen kind);
  static CommutativePolynomial monomial(Key k, const ComplexRational& c);

  const std::map<Key, ComplexRational>& terms() const { return terms_; }

  // Uses a a* = 1 - g g* until no monomial holds both a and a*.
  CommutativePolynomial reduced() const;

  CommutativePolynomial& operator+=(const CommutativePolynomial& o);
  friend CommutativePolynomial operator+(CommutativePolynomial a, const CommutativePolynomial& b) {
    return a += b;
  }
  friend CommutativePolynomial operator-(const CommutativePolynomial& a,
                                         const CommutativePolynomial& b);
  friend CommutativePolynomial operator*(const CommutativePolynomial& a,
                                         const CommutativePolynomial& b);
  friend bool operator==(const CommutativePolynomial& a, const CommutativePolynomial& b) {
    return a.terms_ == b.terms_;
  }

 private:
  void add_term(Key k, const ComplexRational& c);
  std::map<Key, ComplexRational> terms_;
};

CommutativePolynomial classical_limit(const AlgebraExpression& e);

std::string to_string(const CommutativePolynomial& p);

}  // namespace dqm
