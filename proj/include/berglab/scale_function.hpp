#pragma once

#include <utility>
#include <vector>

namespace berglab {

// The recursion generator h of a Zalcman-type domain. All evaluation goes
// through the natural log so that doubly exponential scale sequences stay
// representable.
class ScaleFunction {
 public:
  enum class Family { H1, H2, CustomTable };

  // h(r) = r^alpha, alpha > 1.
  static ScaleFunction power(double alpha);
  // h(r) = r (log 1/r)^(-beta), beta > 0.
  static ScaleFunction log_power(double beta);
  // Monotone samples (r, h(r)), interpolated linearly in log-log space.
  static ScaleFunction table(std::vector<std::pair<double, double>> samples);

  Family family() const { return family_; }
  double alpha() const { return param_; }
  double beta() const { return param_; }
  double param() const { return param_; }
  // Upper end of the validity interval (0, epsilon0).
  double epsilon0() const { return epsilon0_; }

  double operator()(double r) const;
  double log_eval(double log_r) const;

  // Inverse by bisection on log r; throws BisectionFailure when t is not
  // bracketed by h on the validity interval.
  double inverse(double t) const;
  double log_inverse(double log_t) const;

  // Same family with a different parameter (alpha - eps, beta - eps, ...).
  ScaleFunction with_param(double param) const;

 private:
  ScaleFunction(Family family, double param, double epsilon0)
      : family_(family), param_(param), epsilon0_(epsilon0) {}

  Family family_;
  double param_;
  double epsilon0_;
  std::vector<std::pair<double, double>> log_table_;
};

struct InverseCheck {
  double g = 0.0;
  double residual = 0.0;  // |h(g) - t| / t
  bool bound_ok = false;  // g(t) <= t (log 1/t)^beta
};

// Inverse of an H2 scale function together with the bound
// g(t) <= t (log 1/t)^beta.
InverseCheck scale_inverse_check(const ScaleFunction& h, double t);

}  // namespace berglab
