#pragma once

#include <optional>
#include <utility>

namespace dqm {

// Real deformation parameter, 0 < q <= 1.
class DeformationParameter {
 public:
  explicit DeformationParameter(double q);
  double value() const { return q_; }
  bool classical() const { return q_ == 1.0; }
  operator double() const { return q_; }

 private:
  double q_;
};

// A level of the discretized angle spectrum; empty means the infinite level
// supplied by the one-dimensional sector.
struct Level {
  std::optional<long> n;
  static Level infinity() { return Level{}; }
  static Level of(long k) { return Level{k}; }
  bool is_infinite() const { return !n.has_value(); }
};

inline constexpr double kAngleTolerance = 1e-12;

// prod_{k<n} (1 - a q^k)
double q_pochhammer(double a, double q, long n);

double theta_of_n(DeformationParameter q, Level n);
double theta_of_n(DeformationParameter q, long n);

// Level whose angle is closest to theta; ties go to the smaller level.
long n_closest(DeformationParameter q, double theta);

// f(mu, n), normalized so that f(mu, 0) = 1. Overflows to inf for huge mu.
double f_coefficient(DeformationParameter q, double mu, long n);
// log|f(mu, n)|; -inf when mu = 0 and n > 0.
double log_abs_f(DeformationParameter q, double mu, long n);
// f(mu, n + 1) / f(mu, n)
double f_ratio(DeformationParameter q, double mu, long n);

// Level maximizing |f(mu, n)|^2, found from the ratio condition. Ties go to
// the smaller level.
long f_peak_level(DeformationParameter q, double mu);

// Closed range of mu whose peak level equals n (n >= 1).
std::pair<double, double> mu_interval_for_level(DeformationParameter q, long n);

// A mu whose peak level is n_closest(q, theta). Integers inside the admissible
// range are preferred (the one nearest the midpoint), otherwise the midpoint.
double mu_of_theta(DeformationParameter q, double theta);

}  // namespace dqm
