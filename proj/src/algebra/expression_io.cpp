#include "dqm/expression_io.hpp"

#include <cctype>

namespace dqm {

namespace {

class Parser {
 public:
  Parser(std::string_view s, const std::string& copy) : s_(s), default_copy_(copy) {}

  AlgebraExpression run() {
    AlgebraExpression e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool ident_char(char c) const { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
  bool starts_word(std::string_view w) const {
    return s_.substr(pos_, w.size()) == w &&
           (pos_ + w.size() == s_.size() || !ident_char(s_[pos_ + w.size()]));
  }

  AlgebraExpression expr() {
    AlgebraExpression e = term();
    for (;;) {
      if (accept('+')) {
        e += term();
      } else if (accept('-')) {
        e -= term();
      } else {
        return e;
      }
    }
  }

  AlgebraExpression term() {
    AlgebraExpression e = factor();
    for (;;) {
      if (accept('*')) {
        e = e * factor();
      } else if (accept('/')) {
        std::size_t at = pos_;
        AlgebraExpression d = factor();
        if (!d.is_scalar() || d.is_zero() || !d.scalar_part().is_monomial()) {
          pos_ = at;
          fail("division requires a nonzero scalar monomial");
        }
        e = d.scalar_part().pow(-1) * e;
      } else {
        return e;
      }
    }
  }

  AlgebraExpression factor() {
    if (accept('-')) return -factor();
    if (accept('+')) return factor();
    AlgebraExpression base = primary();
    if (accept('^')) {
      bool neg = accept('-');
      if (!neg) accept('+');
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      int k = std::stoi(std::string(s_.substr(start, pos_ - start)));
      if (neg) {
        if (!base.is_scalar() || base.is_zero() || !base.scalar_part().is_monomial())
          fail("negative powers need a scalar monomial base");
        return AlgebraExpression(base.scalar_part().pow(-k));
      }
      return base.pow(k);
    }
    return base;
  }

  AlgebraExpression number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    Rational value(std::string(s_.substr(start, pos_ - start)).c_str());
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      std::size_t fs = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      Rational scale = 1;
      for (std::size_t k = fs; k < pos_; ++k) {
        scale *= 10;
        value += Rational(s_[k] - '0') / scale;
      }
    }
    if (pos_ < s_.size() && s_[pos_] == 'i' && (pos_ + 1 == s_.size() || !ident_char(s_[pos_ + 1]))) {
      ++pos_;
      return AlgebraExpression(Laurent(ComplexRational(0, value)));
    }
    return AlgebraExpression(Laurent(ComplexRational(value)));
  }

  AlgebraExpression primary() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      AlgebraExpression e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (starts_word("i")) {
      ++pos_;
      return AlgebraExpression(Laurent(ComplexRational(0, 1)));
    }
    if (starts_word("q")) {
      ++pos_;
      return AlgebraExpression::q_power(1);
    }
    for (const char* name : {"alpha", "gamma"}) {
      std::string_view w(name);
      if (s_.substr(pos_, w.size()) == w &&
          (pos_ + w.size() == s_.size() || !ident_char(s_[pos_ + w.size()]))) {
        pos_ += w.size();
        bool starred = false;
        if (pos_ < s_.size() && s_[pos_] == '*') {
          char next = pos_ + 1 < s_.size() ? s_[pos_ + 1] : '\0';
          if (!ident_char(next) && next != '(') {
            starred = true;
            ++pos_;
          }
        }
        std::string copy = default_copy_;
        if (pos_ < s_.size() && s_[pos_] == '@') {
          std::size_t start = ++pos_;
          while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
          if (start == pos_) fail("expected copy label after '@'");
          copy = std::string(s_.substr(start, pos_ - start));
        }
        Gen g = w == "alpha" ? Gen::Alpha : Gen::Gamma;
        return AlgebraExpression::generator(copy, starred ? star(g) : g);
      }
    }
    if (c == '\0') fail("unexpected end of input");
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::string default_copy_;
  std::size_t pos_ = 0;
};

std::string power(const std::string& base, int k) {
  return k > 1 ? base + "^" + std::to_string(k) : base;
}

}  // namespace

AlgebraExpression parse_expression(std::string_view text, const std::string& default_copy) {
  return Parser(text, default_copy).run();
}

std::string to_string(const AlgebraExpression& e) {
  if (e.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : e.terms()) {
    if (!out.empty()) out += " + ";
    out += "(" + to_string(c) + ")";
    for (const auto& [copy, w] : m.factors) {
      if (w.alpha > 0) out += "*" + power("alpha@" + copy, w.alpha);
      if (w.alpha < 0) out += "*" + power("alpha*@" + copy, -w.alpha);
      if (w.gamma > 0) out += "*" + power("gamma@" + copy, w.gamma);
      if (w.gamma_star > 0) out += "*" + power("gamma*@" + copy, w.gamma_star);
    }
  }
  return out;
}

}  // namespace dqm
