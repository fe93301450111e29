#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <map>
#include <string>

namespace dqm {

using Rational = boost::multiprecision::cpp_rational;

struct ComplexRational {
  Rational re;
  Rational im;

  ComplexRational() = default;
  ComplexRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
  ComplexRational(long v) : re(v), im(0) {}

  bool is_zero() const { return re == 0 && im == 0; }
  ComplexRational conj() const { return {re, -im}; }
  ComplexRational inverse() const;
  std::complex<double> to_complex() const;

  friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexRational operator-(const ComplexRational& a, const ComplexRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  ComplexRational operator-() const { return {-re, -im}; }
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

std::string to_string(const ComplexRational& c);

// Finite Laurent polynomial in q with complex-rational coefficients.
class Laurent {
 public:
  Laurent() = default;
  Laurent(ComplexRational c, int exponent = 0);
  Laurent(long c) : Laurent(ComplexRational(c)) {}

  static Laurent q_power(int e) { return Laurent(ComplexRational(1), e); }

  bool is_zero() const { return terms_.empty(); }
  const std::map<int, ComplexRational>& terms() const { return terms_; }

  Laurent conj() const;
  // Value at a numeric q.
  std::complex<double> evaluate(double q) const;
  // Exact value at q = 1.
  ComplexRational at_one() const;
  // Single term c q^e?
  bool is_monomial() const { return terms_.size() == 1; }

  Laurent& operator+=(const Laurent& o);
  Laurent& operator-=(const Laurent& o);
  friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
  friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
  friend Laurent operator*(const Laurent& a, const Laurent& b);
  Laurent operator-() const;
  friend bool operator==(const Laurent& a, const Laurent& b) { return a.terms_ == b.terms_; }

  Laurent pow(int k) const;

 private:
  void add_term(int e, const ComplexRational& c);
  std::map<int, ComplexRational> terms_;
};

std::string to_string(const Laurent& l);

}  // namespace dqm
