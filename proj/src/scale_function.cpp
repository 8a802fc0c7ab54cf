#include "berglab/scale_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "berglab/error.hpp"

namespace berglab {

ScaleFunction ScaleFunction::power(double alpha) {
  if (!(alpha > 1.0)) {
    throw Error(ErrorCode::PreconditionViolated, "h1 requires alpha > 1");
  }
  return ScaleFunction(Family::H1, alpha, 1.0);
}

ScaleFunction ScaleFunction::log_power(double beta) {
  if (!(beta > 0.0)) {
    throw Error(ErrorCode::PreconditionViolated, "h2 requires beta > 0");
  }
  // h(r) < r needs log(1/r) > 1.
  return ScaleFunction(Family::H2, beta, std::exp(-1.0));
}

ScaleFunction ScaleFunction::table(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) {
    throw Error(ErrorCode::PreconditionViolated, "scale table needs >= 2 samples");
  }
  std::sort(samples.begin(), samples.end());
  ScaleFunction h(Family::CustomTable, 0.0, samples.back().first);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [r, v] = samples[i];
    if (!(r > 0.0) || !(v > 0.0) || !(v < r)) {
      throw Error(ErrorCode::PreconditionViolated, "scale table needs 0 < h(r) < r");
    }
    if (i > 0 && !(v > samples[i - 1].second)) {
      throw Error(ErrorCode::PreconditionViolated, "scale table must be strictly increasing");
    }
    h.log_table_.emplace_back(std::log(r), std::log(v));
  }
  return h;
}

ScaleFunction ScaleFunction::with_param(double param) const {
  switch (family_) {
    case Family::H1: return power(param);
    case Family::H2: return log_power(param);
    case Family::CustomTable: break;
  }
  throw Error(ErrorCode::PreconditionViolated, "table scale functions have no parameter");
}

double ScaleFunction::log_eval(double log_r) const {
  switch (family_) {
    case Family::H1:
      return param_ * log_r;
    case Family::H2:
      return log_r - param_ * std::log(-log_r);
    case Family::CustomTable: {
      const auto& t = log_table_;
      // Extrapolate with the end slopes.
      std::size_t i = 1;
      while (i + 1 < t.size() && t[i].first < log_r) ++i;
      const auto [u0, v0] = t[i - 1];
      const auto [u1, v1] = t[i];
      return v0 + (v1 - v0) * (log_r - u0) / (u1 - u0);
    }
  }
  return 0.0;
}

double ScaleFunction::operator()(double r) const { return std::exp(log_eval(std::log(r))); }

double ScaleFunction::log_inverse(double log_t) const {
  double lo = -740.0;
  double hi = std::log(epsilon0_);
  if (family_ == Family::H2) hi = std::min(hi, -1e-9);
  if (!(log_eval(lo) <= log_t && log_t <= log_eval(hi))) {
    throw Error(ErrorCode::BisectionFailure,
                "h^{-1}: log t = " + std::to_string(log_t) + " not bracketed");
  }
  for (int it = 0; it < 400 && hi - lo > 1e-16 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (log_eval(mid) < log_t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double ScaleFunction::inverse(double t) const { return std::exp(log_inverse(std::log(t))); }

InverseCheck scale_inverse_check(const ScaleFunction& h, double t) {
  if (h.family() != ScaleFunction::Family::H2) {
    throw Error(ErrorCode::PreconditionViolated, "scale_inverse_check needs an h2 scale");
  }
  if (!(t > 0.0 && t < 1.0)) {
    throw Error(ErrorCode::PreconditionViolated, "scale_inverse_check needs 0 < t < 1");
  }
  InverseCheck out;
  const double log_g = h.log_inverse(std::log(t));
  out.g = std::exp(log_g);
  out.residual = std::abs(std::expm1(h.log_eval(log_g) - std::log(t)));
  // Compare in logs: log g <= log t + beta log log(1/t).
  out.bound_ok = log_g <= std::log(t) + h.beta() * std::log(-std::log(t));
  return out;
}

}  // namespace berglab
