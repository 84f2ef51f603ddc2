#pragma once

#include "fse/models.hpp"
#include "fse/strength.hpp"

namespace fse {

/// The marginal-likelihood-maximizing prior under the quantile constraint:
/// mass weight_p at theta_p >= theta0 and weight_d at theta_d < theta0.
/// A point sitting at the open boundary is reported as theta0 with its flag set.
struct TwoPointPrior {
  double theta_p = 0.0;
  double theta_d = 0.0;
  double weight_p = 0.5;
  double weight_d = 0.5;
  bool theta_p_at_boundary = false;
  bool theta_d_at_boundary = false;
};

/// V(x) = sup_{theta >= theta0} f(x|theta) / sup_{theta < theta0} f(x|theta).
///
/// For generic families an underflowing supremum gives a saturated result whose
/// log10_value is a bound on the true value (value is then +inf or 0).
EvidenceStrength v_nonparam(const EvidenceModel& model, double x, double theta0);

/// Same value for every alpha in (0, 1): the prior weights cancel.
EvidenceStrength v_nonparam(const EvidenceModel& model, double x, double theta0, double alpha);

/// Normal location closed form: exp(+-(x - theta0)^2 / (2 sigma^2)), + when x >= theta0.
EvidenceStrength v_nonparam_normal_closed(double x, double theta0, double sigma);

/// Scale family with k = phi:
///   (|x|/theta0) phi(|x|/theta0) / phi(1)   if |x| <= theta0
///   (theta0/|x|) phi(1) / phi(|x|/theta0)   otherwise.
EvidenceStrength v_nonparam_scale_normal_closed(double x, double theta0);

TwoPointPrior empirical_prior(const EvidenceModel& model, double x, double theta0, double alpha);

/// g(x) = weight_p f(x|theta_p) + weight_d f(x|theta_d).
double two_point_marginal(const TwoPointPrior& prior, const EvidenceModel& model, double x);

}  // namespace fse
