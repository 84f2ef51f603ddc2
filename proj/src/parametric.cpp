#include "fse/parametric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fse/errors.hpp"
#include "fse/normal.hpp"

namespace fse {
namespace {

void require_sigma(double sigma) { detail::require_positive(sigma, "sigma"); }

void require_unbalanced_alpha(double alpha) {
  detail::require_probability(alpha, "alpha");
  if (!(alpha > 0.5)) throw DomainError("alpha must be > 0.5 here");
}

// Phi^{-1}(1 - alpha); negative for alpha > 0.5.
double lower_quantile(double alpha) { return std_normal_quantile(1.0 - alpha); }

double newton_polish(const CubicPoly& p, double root) {
  for (int i = 0; i < 2; ++i) {
    const double slope = p.derivative(root);
    if (slope == 0.0) break;
    const double next = root - p(root) / slope;
    if (!std::isfinite(next)) break;
    if (std::fabs(p(next)) > std::fabs(p(root))) break;
    root = next;
  }
  return root;
}

}  // namespace

NormalPrior::NormalPrior(double m, double t) : mu(m), tau(t) {
  detail::require_finite(m, "mu");
  detail::require_finite(t, "tau");
  if (t < 0.0) throw DomainError("tau must be >= 0");
}

double NormalPrior::mass_above(double theta0) const {
  if (tau == 0.0) return mu >= theta0 ? 1.0 : 0.0;
  return std_normal_cdf((mu - theta0) / tau);
}

QuantileConstraint::QuantileConstraint(double t0, double a) : theta0(t0), alpha(a) {
  detail::require_finite(t0, "theta0");
  detail::require_probability(a, "alpha");
}

std::vector<double> CubicPoly::real_roots() const {
  if (c3 == 0.0) throw DomainError("CubicPoly: leading coefficient is zero");
  // Monic form y^3 + a y^2 + b y + c after rescaling tau = s y to O(1) coefficients.
  const double a0 = c2 / c3;
  const double b0 = c1 / c3;
  const double cc0 = c0 / c3;
  const double s = std::max({std::fabs(a0), std::sqrt(std::fabs(b0)), std::cbrt(std::fabs(cc0))});
  if (s == 0.0) return {0.0};
  const double a = a0 / s;
  const double b = b0 / (s * s);
  const double c = cc0 / (s * s * s);

  // Depressed cubic t^3 + p t + q with y = t - a/3.
  const double shift = a / 3.0;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double disc = 0.25 * q * q + p * p * p / 27.0;

  std::vector<double> roots;
  if (p == 0.0 && q == 0.0) {
    roots.push_back(-shift);
  } else if (disc > 0.0) {
    // One real root; pick the cube-root branch free of cancellation.
    const double u = std::cbrt(-0.5 * q - std::copysign(std::sqrt(disc), q));
    const double v = u == 0.0 ? 0.0 : -p / (3.0 * u);
    roots.push_back(u + v - shift);
  } else {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      roots.push_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - shift);
    }
  }

  for (double& r : roots) {
    r = newton_polish(*this, r * s);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double log_marginal_density(double x, const NormalPrior& prior, double sigma) {
  detail::require_finite(x, "x");
  require_sigma(sigma);
  const double sd = std::hypot(sigma, prior.tau);
  return std_normal_log_pdf((x - prior.mu) / sd) - std::log(sd);
}

double marginal_density(double x, const NormalPrior& prior, double sigma) {
  return std::exp(log_marginal_density(x, prior, sigma));
}

PartialIntegrals partial_integrals(double x, const NormalPrior& prior, double sigma, double theta0) {
  detail::require_finite(theta0, "theta0");
  if (prior.tau == 0.0) {
    throw DomainError("partial_integrals: tau = 0 has no split; use v_known_prior");
  }
  const double log_g = log_marginal_density(x, prior, sigma);
  const double s2 = sigma * sigma;
  const double t2 = prior.tau * prior.tau;
  const double post_mean = (t2 * x + s2 * prior.mu) / (s2 + t2);
  const double post_sd = sigma * prior.tau / std::sqrt(s2 + t2);
  const double z = (theta0 - post_mean) / post_sd;

  PartialIntegrals out;
  out.log_lower_mass = log_g + std_normal_log_cdf(z);
  out.log_upper_mass = log_g + std_normal_log_cdf(-z);
  out.lower_mass = std::exp(out.log_lower_mass);
  out.upper_mass = std::exp(out.log_upper_mass);
  return out;
}

EvidenceStrength v_known_prior(double x, const NormalPrior& prior, double sigma, double theta0) {
  detail::require_finite(x, "x");
  detail::require_finite(theta0, "theta0");
  require_sigma(sigma);
  if (prior.tau == 0.0) {
    EvidenceStrength s = EvidenceStrength::unity(Method::known_prior);
    s.tau_hat = 0.0;
    s.mu_hat = prior.mu;
    s.in_flat_region = true;
    return s;
  }
  const double tau = prior.tau;
  const double s2 = sigma * sigma;
  const double posterior_arg =
      (tau * tau * (x - theta0) + s2 * (prior.mu - theta0)) / (sigma * tau * std::sqrt(s2 + tau * tau));
  const double prior_arg = (prior.mu - theta0) / tau;
  const double ln_v = (log_lambda_ratio(posterior_arg) - log_lambda_ratio(prior_arg)).value;
  EvidenceStrength s = EvidenceStrength::from_log(ln_v, Method::known_prior);
  s.tau_hat = tau;
  s.mu_hat = prior.mu;
  return s;
}

NormalPrior prior_from_constraint(const QuantileConstraint& constraint, double tau) {
  detail::require_finite(tau, "tau");
  if (tau < 0.0) throw DomainError("tau must be >= 0");
  if (constraint.alpha < 0.5) {
    throw DomainError("prior_from_constraint: alpha < 0.5 is handled by reflection in v_unbalanced");
  }
  if (constraint.alpha == 0.5 || tau == 0.0) return NormalPrior(constraint.theta0, tau);
  return NormalPrior(constraint.theta0 - lower_quantile(constraint.alpha) * tau, tau);
}

double tau_hat_balanced(double x, double theta0, double sigma) {
  detail::require_finite(x, "x");
  detail::require_finite(theta0, "theta0");
  require_sigma(sigma);
  const double d = std::fabs(x - theta0);
  if (d <= sigma) return 0.0;
  return std::sqrt((d - sigma) * (d + sigma));
}

EvidenceStrength v_balanced(double x, double theta0, double sigma) {
  const double tau = tau_hat_balanced(x, theta0, sigma);
  EvidenceStrength s;
  if (tau == 0.0) {
    s = EvidenceStrength::unity(Method::balanced);
    s.in_flat_region = true;
  } else {
    const double arg = std::copysign(tau / sigma, x - theta0);
    s = EvidenceStrength::from_log(log_lambda_ratio(arg).value, Method::balanced);
  }
  s.tau_hat = tau;
  s.mu_hat = theta0;
  return s;
}

CubicPoly cubic_coeffs(double x, double theta0, double sigma, double alpha) {
  detail::require_finite(x, "x");
  detail::require_finite(theta0, "theta0");
  require_sigma(sigma);
  require_unbalanced_alpha(alpha);
  const double q = lower_quantile(alpha);
  const double d = x - theta0;
  const double s2 = sigma * sigma;
  CubicPoly p;
  p.c3 = -1.0;
  p.c2 = q * d;
  p.c1 = d * d - s2 * (q * q + 1.0);
  p.c0 = -q * d * s2;
  return p;
}

double constrained_log_likelihood(double x, double theta0, double sigma, double alpha, double tau) {
  require_unbalanced_alpha(alpha);
  return log_marginal_density(x, prior_from_constraint(QuantileConstraint(theta0, alpha), tau), sigma);
}

double constrained_likelihood(double x, double theta0, double sigma, double alpha, double tau) {
  return std::exp(constrained_log_likelihood(x, theta0, sigma, alpha, tau));
}

double tau_hat_unbalanced(double x, double theta0, double sigma, double alpha) {
  const CubicPoly p = cubic_coeffs(x, theta0, sigma, alpha);
  double best_tau = 0.0;
  double best_log = constrained_log_likelihood(x, theta0, sigma, alpha, 0.0);
  for (double root : p.real_roots()) {
    if (!std::isfinite(root)) {
      throw NumericalError("tau_hat_unbalanced: non-finite cubic root at x = " + std::to_string(x));
    }
    // Local maxima of g_tau are where P crosses from + to -.
    if (!(root > 0.0) || !(p.derivative(root) < 0.0)) continue;
    const double ll = constrained_log_likelihood(x, theta0, sigma, alpha, root);
    if (ll > best_log) {
      best_log = ll;
      best_tau = root;
    }
  }
  return best_tau;
}

EvidenceStrength v_unbalanced(double x, double theta0, double sigma, double alpha) {
  detail::require_finite(x, "x");
  detail::require_finite(theta0, "theta0");
  require_sigma(sigma);
  detail::require_probability(alpha, "alpha");

  if (alpha == 0.5) {
    EvidenceStrength s = v_balanced(x, theta0, sigma);
    s.method = Method::unbalanced;
    return s;
  }
  if (alpha < 0.5) {
    // theta -> 2 theta0 - theta swaps the hypotheses and maps alpha to 1 - alpha.
    EvidenceStrength s = v_unbalanced(2.0 * theta0 - x, theta0, sigma, 1.0 - alpha).inverted();
    if (s.mu_hat) s.mu_hat = 2.0 * theta0 - *s.mu_hat;
    return s;
  }

  const double tau = tau_hat_unbalanced(x, theta0, sigma, alpha);
  const NormalPrior prior = prior_from_constraint(QuantileConstraint(theta0, alpha), tau);
  EvidenceStrength s;
  if (tau == 0.0) {
    s = EvidenceStrength::unity(Method::unbalanced);
    s.in_flat_region = true;
  } else {
    s = v_known_prior(x, prior, sigma, theta0);
    s.method = Method::unbalanced;
  }
  s.tau_hat = tau;
  s.mu_hat = prior.mu;
  return s;
}

double flat_left_endpoint(double theta0, double sigma, double alpha) {
  detail::require_finite(theta0, "theta0");
  require_sigma(sigma);
  require_unbalanced_alpha(alpha);

  const double left = theta0 - 10.0 * sigma * (1.0 + std::fabs(lower_quantile(alpha)));
  auto flat = [&](double x) { return tau_hat_unbalanced(x, theta0, sigma, alpha) == 0.0; };

  // The flat set must look like [x0, theta0] on the bracket: a run of non-flat points
  // followed by a run of flat ones.
  constexpr int probes = 256;
  const double step = (theta0 - left) / probes;
  int first_flat = -1;
  for (int i = 0; i <= probes; ++i) {
    const double x = i == probes ? theta0 : left + step * i;
    const bool is_flat = flat(x);
    if (i == 0 && is_flat) {
      throw NumericalError("flat_left_endpoint: tau_hat is already 0 at the left end of the search bracket");
    }
    if (is_flat && first_flat < 0) {
      first_flat = i;
    } else if (!is_flat && first_flat >= 0) {
      throw NumericalError("flat_left_endpoint: flat set is not an interval ending at theta0 (x = " +
                           std::to_string(x) + ")");
    }
  }
  if (first_flat < 0) {
    throw NumericalError("flat_left_endpoint: tau_hat > 0 at theta0");
  }

  double lo = left + step * (first_flat - 1);
  double hi = first_flat == probes ? theta0 : left + step * first_flat;
  const double tol = 1e-10 * sigma;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (flat(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace fse
