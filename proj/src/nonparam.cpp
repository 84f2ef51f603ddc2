#include "fse/nonparam.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fse/errors.hpp"
#include "fse/normal.hpp"

namespace fse {

EvidenceStrength v_nonparam(const EvidenceModel& model, double x, double theta0) {
  const Supremum upper = sup_density(model, x, theta0, Side::upper);
  const Supremum lower = sup_density(model, x, theta0, Side::lower);

  const bool upper_lost = std::isinf(upper.log_value);
  const bool lower_lost = std::isinf(lower.log_value);
  if (upper_lost && lower_lost) {
    throw NumericalError("v_nonparam: both one-sided suprema underflow at x = " + std::to_string(x));
  }
  if (!upper_lost && !lower_lost) {
    return EvidenceStrength::from_log(upper.log_value - lower.log_value, Method::nonparam);
  }

  // One side underflowed: bound it by the smallest subnormal.
  const double floor_log = std::log(std::numeric_limits<double>::denorm_min());
  EvidenceStrength s = EvidenceStrength::from_log(
      (upper_lost ? floor_log : upper.log_value) - (lower_lost ? floor_log : lower.log_value), Method::nonparam);
  s.value = lower_lost ? std::numeric_limits<double>::infinity() : 0.0;
  s.saturated = true;
  return s;
}

EvidenceStrength v_nonparam(const EvidenceModel& model, double x, double theta0, double alpha) {
  detail::require_probability(alpha, "alpha");
  return v_nonparam(model, x, theta0);
}

EvidenceStrength v_nonparam_normal_closed(double x, double theta0, double sigma) {
  detail::require_finite(x, "x");
  detail::require_finite(theta0, "theta0");
  detail::require_positive(sigma, "sigma");
  if (x == theta0) return EvidenceStrength::unity(Method::nonparam);
  const double z = (x - theta0) / sigma;
  const double half_sq = 0.5 * z * z;
  return EvidenceStrength::from_log(x > theta0 ? half_sq : -half_sq, Method::nonparam);
}

EvidenceStrength v_nonparam_scale_normal_closed(double x, double theta0) {
  detail::require_finite(x, "x");
  detail::require_positive(theta0, "theta0");
  if (x == 0.0) {
    throw DomainError("scale family: x = 0 is outside the domain");
  }
  const double r = std::fabs(x) / theta0;
  if (r == 1.0) return EvidenceStrength::unity(Method::nonparam);
  // ln(r phi(r)/phi(1)) = ln r - (r^2 - 1)/2
  const double log_inner = std::log(r) - 0.5 * (r * r - 1.0);
  return EvidenceStrength::from_log(r < 1.0 ? log_inner : -log_inner, Method::nonparam);
}

TwoPointPrior empirical_prior(const EvidenceModel& model, double x, double theta0, double alpha) {
  detail::require_probability(alpha, "alpha");
  const Supremum upper = sup_density(model, x, theta0, Side::upper);
  const Supremum lower = sup_density(model, x, theta0, Side::lower);
  TwoPointPrior p;
  p.theta_p = upper.arg;
  p.theta_d = lower.arg;
  p.theta_p_at_boundary = upper.at_boundary;
  p.theta_d_at_boundary = lower.at_boundary;
  p.weight_p = alpha;
  p.weight_d = 1.0 - alpha;
  return p;
}

double two_point_marginal(const TwoPointPrior& prior, const EvidenceModel& model, double x) {
  return prior.weight_p * density_at(model, x, prior.theta_p) + prior.weight_d * density_at(model, x, prior.theta_d);
}

}  // namespace fse
