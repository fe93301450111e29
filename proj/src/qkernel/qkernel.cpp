#include "dqm/qkernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dqm {

DeformationParameter::DeformationParameter(double q) : q_(q) {
  if (!(q > 0.0 && q <= 1.0)) {
    throw std::invalid_argument("deformation parameter must satisfy 0 < q <= 1, got " +
                                std::to_string(q));
  }
}

namespace {

void require_deformed(DeformationParameter q) {
  if (q.classical()) throw std::invalid_argument("construction requires q < 1");
}

}  // namespace

double q_pochhammer(double a, double q, long n) {
  if (n < 0) throw std::invalid_argument("q_pochhammer: negative n");
  double out = 1.0;
  double qk = 1.0;
  for (long k = 0; k < n; ++k) {
    out *= 1.0 - a * qk;
    qk *= q;
  }
  return out;
}

double theta_of_n(DeformationParameter q, Level n) {
  if (n.is_infinite()) return 0.0;
  return theta_of_n(q, *n.n);
}

double theta_of_n(DeformationParameter q, long n) {
  if (n < 0) throw std::invalid_argument("theta_of_n: negative level");
  return 2.0 * std::asin(std::pow(q.value(), static_cast<double>(n)));
}

long n_closest(DeformationParameter q, double theta) {
  if (!(theta > 0.0) || theta > std::numbers::pi + kAngleTolerance) {
    throw std::invalid_argument("n_closest: theta must lie in (0, pi]");
  }
  if (q.classical()) return 0;
  double s = std::sin(std::min(theta, std::numbers::pi) / 2.0);
  double guess = std::log(s) / std::log(q.value());
  long lo = std::max(0L, static_cast<long>(std::floor(guess)) - 1);
  long best = lo;
  double best_d = std::abs(theta_of_n(q, lo) - theta);
  for (long n = lo + 1; n <= lo + 3; ++n) {
    double d = std::abs(theta_of_n(q, n) - theta);
    if (d < best_d - kAngleTolerance) {
      best = n;
      best_d = d;
    }
  }
  return best;
}

double log_abs_f(DeformationParameter q, double mu, long n) {
  require_deformed(q);
  if (mu < 0.0) throw std::invalid_argument("f_coefficient: mu must be non-negative");
  if (n < 0) throw std::invalid_argument("f_coefficient: negative level");
  if (n == 0) return 0.0;
  if (mu == 0.0) return -std::numeric_limits<double>::infinity();
  const double lq = std::log(q.value());
  const double dn = static_cast<double>(n);
  double out = 0.5 * dn * (dn - 1.0) * lq + 0.5 * (dn - 1.0) * std::log1p(-q * q) +
               dn * std::log(mu);
  for (long j = 2; j <= n; ++j) out -= 0.5 * std::log1p(-std::exp(2.0 * j * lq));
  return out;
}

double f_coefficient(DeformationParameter q, double mu, long n) {
  double l = log_abs_f(q, mu, n);
  return std::isinf(l) && l < 0 ? 0.0 : std::exp(l);
}

double f_ratio(DeformationParameter q, double mu, long n) {
  require_deformed(q);
  if (n < 0) throw std::invalid_argument("f_ratio: negative level");
  const double qq = q.value();
  return mu * std::pow(qq, static_cast<double>(n)) * std::sqrt(1.0 - qq * qq) /
         std::sqrt(1.0 - std::pow(qq, 2.0 * static_cast<double>(n) + 2.0));
}

long f_peak_level(DeformationParameter q, double mu) {
  require_deformed(q);
  if (mu < 0.0) throw std::invalid_argument("f_peak_level: mu must be non-negative");
  long n = 0;
  while (f_ratio(q, mu, n) > 1.0) ++n;
  return n;
}

std::pair<double, double> mu_interval_for_level(DeformationParameter q, long n) {
  require_deformed(q);
  if (n < 1) throw std::invalid_argument("mu_interval_for_level: level must be >= 1");
  // peak at n  <=>  ratio(n - 1) > 1 >= ratio(n)
  const double qq = q.value();
  const double s = std::sqrt(1.0 - qq * qq);
  auto edge = [&](long k) {
    return std::sqrt(1.0 - std::pow(qq, 2.0 * (k + 1))) / (std::pow(qq, double(k)) * s);
  };
  return {edge(n - 1), edge(n)};
}

double mu_of_theta(DeformationParameter q, double theta) {
  long n = n_closest(q, theta);
  if (n == 0) return 0.0;
  auto [lo, hi] = mu_interval_for_level(q, n);
  const double mid = 0.5 * (lo + hi);
  double best = mid;
  double best_d = std::numeric_limits<double>::infinity();
  for (double k = std::ceil(lo); k <= hi; k += 1.0) {
    if (k <= lo) continue;
    double d = std::abs(k - mid);
    if (d < best_d) {
      best = k;
      best_d = d;
    }
  }
  return best;
}

}  // namespace dqm
