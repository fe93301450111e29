#include "dqm/laurent.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dqm {

ComplexRational ComplexRational::inverse() const {
  Rational n = re * re + im * im;
  if (n == 0) throw std::domain_error("division by zero coefficient");
  return {re / n, -im / n};
}

std::complex<double> ComplexRational::to_complex() const {
  return {re.convert_to<double>(), im.convert_to<double>()};
}

std::string to_string(const ComplexRational& c) {
  std::ostringstream os;
  if (c.im == 0) {
    os << c.re;
  } else if (c.re == 0) {
    os << c.im << "*i";
  } else {
    os << c.re << (c.im < 0 ? "-" : "+") << abs(c.im) << "*i";
  }
  return os.str();
}

Laurent::Laurent(ComplexRational c, int exponent) {
  if (!c.is_zero()) terms_.emplace(exponent, std::move(c));
}

void Laurent::add_term(int e, const ComplexRational& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(e, c);
  if (!fresh) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Laurent Laurent::conj() const {
  Laurent out;
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, c.conj());
  return out;
}

std::complex<double> Laurent::evaluate(double q) const {
  std::complex<double> out = 0.0;
  for (const auto& [e, c] : terms_) out += c.to_complex() * std::pow(q, e);
  return out;
}

ComplexRational Laurent::at_one() const {
  ComplexRational out;
  for (const auto& [e, c] : terms_) out = out + c;
  return out;
}

Laurent& Laurent::operator+=(const Laurent& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Laurent& Laurent::operator-=(const Laurent& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Laurent operator*(const Laurent& a, const Laurent& b) {
  Laurent out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
  return out;
}

Laurent Laurent::operator-() const {
  Laurent out;
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

Laurent Laurent::pow(int k) const {
  if (k < 0) {
    if (!is_monomial()) throw std::domain_error("negative power of a non-monomial coefficient");
    const auto& [e, c] = *terms_.begin();
    ComplexRational inv = c.inverse();
    ComplexRational acc(1);
    for (int i = 0; i < -k; ++i) acc = acc * inv;
    return Laurent(acc, e * k);
  }
  Laurent out(1);
  for (int i = 0; i < k; ++i) out = out * *this;
  return out;
}

std::string to_string(const Laurent& l) {
  if (l.is_zero()) return "0";
  std::string out;
  for (const auto& [e, c] : l.terms()) {
    if (!out.empty()) out += " + ";
    out += "(" + to_string(c) + ")";
    if (e != 0) out += "*q^" + std::to_string(e);
  }
  return out;
}

}  // namespace dqm
