#pragma once

#include <vector>

#include "fse/strength.hpp"

// Parametric empirical Bayes for normal evidence X ~ N(theta, sigma^2) with a
// normal prior theta ~ N(mu, tau^2), optionally constrained so that the prior
// puts mass alpha on [theta0, inf).

namespace fse {

struct NormalPrior {
  double mu;
  double tau;  // tau = 0 is a point mass at mu

  NormalPrior(double mu, double tau);

  /// Prior probability of theta >= theta0.
  double mass_above(double theta0) const;
};

struct QuantileConstraint {
  double theta0;
  double alpha;  // P(theta >= theta0)

  QuantileConstraint(double theta0, double alpha);
};

/// P(tau) = c3 tau^3 + c2 tau^2 + c1 tau + c0; its sign is the sign of d/dtau g_tau(x).
struct CubicPoly {
  double c3 = -1.0;
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;

  double operator()(double tau) const { return ((c3 * tau + c2) * tau + c1) * tau + c0; }
  double derivative(double tau) const { return (3.0 * c3 * tau + 2.0 * c2) * tau + c1; }
  double second_derivative(double tau) const { return 6.0 * c3 * tau + 2.0 * c2; }

  /// All real roots, ascending, each polished by Newton steps.
  std::vector<double> real_roots() const;
};

/// Density of N(mu, sigma^2 + tau^2) at x.
double marginal_density(double x, const NormalPrior& prior, double sigma);
double log_marginal_density(double x, const NormalPrior& prior, double sigma);

/// The two one-sided pieces of the marginal density, split at theta0:
/// lower = int_{-inf}^{theta0} f(x|theta) pi(theta) dtheta, upper the rest.
struct PartialIntegrals {
  double lower_mass = 0.0;
  double upper_mass = 0.0;
  double log_lower_mass = 0.0;
  double log_upper_mass = 0.0;
};

PartialIntegrals partial_integrals(double x, const NormalPrior& prior, double sigma, double theta0);

/// Bayes factor under a fully known normal prior, evaluated in log space.
/// tau = 0 gives exactly 1.
EvidenceStrength v_known_prior(double x, const NormalPrior& prior, double sigma, double theta0);

/// mu = theta0 - Phi^{-1}(1 - alpha) tau. Requires alpha >= 0.5.
NormalPrior prior_from_constraint(const QuantileConstraint& constraint, double tau);

/// MLE of tau with mu = theta0: 0 if |x - theta0| <= sigma, else sqrt((x - theta0)^2 - sigma^2).
double tau_hat_balanced(double x, double theta0, double sigma);

EvidenceStrength v_balanced(double x, double theta0, double sigma);

CubicPoly cubic_coeffs(double x, double theta0, double sigma, double alpha);

/// ln g_tau(x): log marginal density with mu tied to tau through the quantile constraint.
double constrained_log_likelihood(double x, double theta0, double sigma, double alpha, double tau);

/// g_tau(x) on the linear scale.
double constrained_likelihood(double x, double theta0, double sigma, double alpha, double tau);

/// Global maximizer over tau >= 0 of g_tau(x), alpha > 0.5.
/// Ties between tau = 0 and an interior maximum resolve to 0.
double tau_hat_unbalanced(double x, double theta0, double sigma, double alpha);

/// Strength with (mu, tau) fitted by constrained maximum likelihood. alpha = 0.5 uses the
/// balanced closed form; alpha < 0.5 is mapped onto alpha > 0.5 by reflecting about theta0.
EvidenceStrength v_unbalanced(double x, double theta0, double sigma, double alpha);

/// Left end x0 of the flat interval [x0, theta0] on which tau_hat = 0, alpha > 0.5.
/// Throws NumericalError if the flat set is not an interval on the search bracket.
double flat_left_endpoint(double theta0, double sigma, double alpha);

}  // namespace fse
