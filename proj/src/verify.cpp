#include "fse/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fse/models.hpp"
#include "fse/nonparam.hpp"
#include "fse/normal.hpp"
#include "fse/oracle.hpp"
#include "fse/parametric.hpp"

namespace fse::verify {
namespace {

template <class... Args>
std::string describe(const Args&... args) {
  std::ostringstream os;
  os.precision(6);
  (os << ... << args);
  return os.str();
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double rel_diff(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

}  // namespace

CheckResult check_nonparam_closed_form() {
  constexpr double theta0 = 1.0;
  constexpr double sigma = 0.1;
  const EvidenceModel generic = normal_location_kernel(sigma);

  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = 0.5 + 1.0 * i / 200.0;
    const double numeric = v_nonparam(generic, x, theta0).value;
    const double closed = v_nonparam_normal_closed(x, theta0, sigma).value;
    worst = std::max(worst, rel_diff(numeric, closed));
  }
  const double at_threshold = v_nonparam(generic, theta0, theta0).value;
  const bool passed = worst <= 1e-6 && at_threshold == 1.0;
  return {"nonparametric suprema vs closed form", passed,
          describe("max rel diff ", worst, " over 201 points (tol 1e-6); V(theta0) = ", at_threshold)};
}

CheckResult check_known_prior_vs_quadrature() {
  std::mt19937_64 rng(20240611);
  double worst_log = 0.0;
  double worst_odds = 0.0;
  int draws = 0;
  while (draws < 200) {
    const double sigma = uniform(rng, 0.05, 1.0);
    const double tau = uniform(rng, 0.05, 1.0);
    const double theta0 = uniform(rng, -2.0, 2.0);
    const double mu = theta0 + tau * uniform(rng, -3.0, 3.0);
    const double x = mu + std::hypot(sigma, tau) * uniform(rng, -4.0, 4.0);

    const double prior_arg = (mu - theta0) / tau;
    const double posterior_arg =
        (tau * tau * (x - theta0) + sigma * sigma * (mu - theta0)) / (sigma * tau * std::hypot(sigma, tau));
    if (std::fabs(prior_arg) > 6.0 || std::fabs(posterior_arg) > 6.0) continue;
    ++draws;

    const NormalPrior prior(mu, tau);
    const EvidenceStrength closed = v_known_prior(x, prior, sigma, theta0);
    const double quad = oracle::v_by_integration(oracle::GenericPrior::normal(mu, tau), NormalLocationModel(sigma), x,
                                                 theta0);
    worst_log = std::max(worst_log, std::fabs(closed.log10_value * std::log(10.0) - std::log(quad)));

    // Posterior odds = V * prior odds.
    const PartialIntegrals parts = partial_integrals(x, prior, sigma, theta0);
    const double log_posterior_odds = parts.log_upper_mass - parts.log_lower_mass;
    const double log_prior_odds = std_normal_log_cdf(prior_arg) - std_normal_log_cdf(-prior_arg);
    const double log_product = closed.log10_value * std::log(10.0) + log_prior_odds;
    worst_odds = std::max(worst_odds, std::fabs(std::expm1(log_posterior_odds - log_product)));
  }
  const bool passed = worst_log <= 1e-8 && worst_odds <= 1e-10;
  return {"known normal prior vs quadrature", passed,
          describe("max |ln V diff| ", worst_log, " (tol 1e-8); max Bayes-rule rel err ", worst_odds,
                   " (tol 1e-10); 200 draws")};
}

CheckResult check_balanced_exactness() {
  constexpr double theta0 = 1.0;
  constexpr double sigma = 0.1;

  bool flat_exact = true;
  for (int i = 0; i <= 1000; ++i) {
    const double x = theta0 - sigma + 2.0 * sigma * i / 1000.0;
    if (std::fabs(x - theta0) > sigma) continue;
    const EvidenceStrength s = v_balanced(x, theta0, sigma);
    flat_exact = flat_exact && s.value == 1.0 && s.log10_value == 0.0 && s.in_flat_region;
  }

  const double at_two_sigma = v_balanced(theta0 + 2.0 * sigma, theta0, sigma).value;
  const double root3 = std::sqrt(3.0);
  const double reference = oracle::reference_normal_cdf(root3) / oracle::reference_normal_cdf(-root3);
  const double lambda_err = rel_diff(at_two_sigma, reference);

  double worst_tau = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double x = theta0 - 5.0 * sigma + 10.0 * sigma * i / 49.0;
    auto g = [&](double tau) { return marginal_density(x, NormalPrior(theta0, tau), sigma); };
    const double grid = oracle::maximize_likelihood_grid(g, 20.0 * sigma).arg_max;
    worst_tau = std::max(worst_tau, std::fabs(grid - tau_hat_balanced(x, theta0, sigma)));
  }

  const bool passed = flat_exact && lambda_err <= 5e-3 && worst_tau <= 1e-8;
  return {"balanced prior: flat region, Lambda(sqrt 3), tau_hat", passed,
          describe("flat region exact: ", flat_exact ? "yes" : "no", "; V(theta0+2sigma) = ", at_two_sigma,
                   " rel err ", lambda_err, " (tol 5e-3); max |tau_hat grid - closed| ", worst_tau, " (tol 1e-8)")};
}

CheckResult check_unbalanced_structure() {
  constexpr double theta0 = 1.0;
  constexpr double sigma = 0.1;
  struct Case {
    double alpha, pinned_x0, pinned_jump;
  };
  bool passed = true;
  std::ostringstream detail;
  detail.precision(12);
  for (const Case c : {Case{0.55, kFlatLeftEndpointAlpha055, kJumpValueAlpha055},
                       Case{0.75, kFlatLeftEndpointAlpha075, kJumpValueAlpha075}}) {
    const double x0 = flat_left_endpoint(theta0, sigma, c.alpha);
    const double q = std_normal_quantile(1.0 - c.alpha);
    const double radius = sigma * std::sqrt(3.0 * (q * q + 1.0) / (q * q + 3.0));

    bool flat = x0 < theta0 && x0 <= theta0 - radius;
    for (int i = 0; i <= 400; ++i) {
      const double x = (x0 + 1e-8) + (theta0 - x0 - 1e-8) * i / 400.0;
      flat = flat && v_unbalanced(x, theta0, sigma, c.alpha).value == 1.0;
    }

    auto nondecreasing = [&](double lo, double hi) {
      double prev = -std::numeric_limits<double>::infinity();
      for (int i = 0; i <= 400; ++i) {
        const double v = v_unbalanced(lo + (hi - lo) * i / 400.0, theta0, sigma, c.alpha).log10_value;
        if (v < prev - 1e-12) return false;
        prev = v;
      }
      return true;
    };
    const bool below = nondecreasing(x0 - 5.0 * sigma, x0 - 1e-6);
    const bool above = nondecreasing(theta0, theta0 + 5.0 * sigma);
    const double jump = v_unbalanced(x0 - 1e-4, theta0, sigma, c.alpha).value;

    const bool ok = flat && below && above && jump < 0.99 && std::fabs(x0 - c.pinned_x0) <= 1e-9 &&
                    rel_diff(jump, c.pinned_jump) <= 1e-6;
    passed = passed && ok;
    if (detail.tellp() > 0) detail << "; ";
    detail << "alpha " << c.alpha << ": x0 " << x0 << ", flat " << (flat ? "ok" : "FAIL") << ", monotone "
           << (below && above ? "ok" : "FAIL") << ", V(x0-1e-4) " << jump;
  }
  return {"unbalanced prior: flat interval and jump", passed, detail.str()};
}

CheckResult check_cubic_sign_identity() {
  constexpr double theta0 = 1.0;
  constexpr double sigma = 0.1;
  std::mt19937_64 rng(977);
  int agree = 0;
  int draws = 0;
  while (draws < 20) {
    const double alpha = uniform(rng, 0.55, 0.9);
    const double x = theta0 + sigma * uniform(rng, -3.0, 3.0);
    const double tau = sigma * uniform(rng, 0.2, 5.0);

    // Keep draws whose derivative is well clear of the finite-difference dead zone.
    const CubicPoly p = cubic_coeffs(x, theta0, sigma, alpha);
    const NormalPrior prior = prior_from_constraint(QuantileConstraint(theta0, alpha), tau);
    const double var = sigma * sigma + tau * tau;
    const double exact_slope =
        p(tau) * std_normal_pdf((x - prior.mu) / std::sqrt(var)) / std::pow(var, 2.5);
    if (std::fabs(exact_slope) < 1e-6) continue;
    ++draws;

    auto g = [&](double t) { return constrained_likelihood(x, theta0, sigma, alpha, t); };
    const int fd = oracle::finite_difference_sign(g, tau, 1e-6 * sigma);
    const int poly = p(tau) > 0.0 ? 1 : (p(tau) < 0.0 ? -1 : 0);
    if (fd == poly) ++agree;
  }
  return {"sign of dg/dtau equals sign of P(tau)", agree == draws, describe(agree, "/", draws, " draws agree")};
}

CheckResult check_two_point_optimality() {
  constexpr double theta0 = 1.0;
  constexpr double sigma = 0.1;
  const EvidenceModel model = NormalLocationModel(sigma);
  std::mt19937_64 rng(4242);

  double worst_excess = -std::numeric_limits<double>::infinity();
  double worst_mass_err = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    const double alpha = uniform(rng, 0.05, 0.95);
    const double x = theta0 + sigma * uniform(rng, -4.0, 4.0);

    struct Component {
      double mean, sd, weight, norm;
      bool upper;
    };
    std::vector<Component> comps;
    std::vector<double> breaks{theta0};
    double lo = theta0;
    double hi = theta0;
    for (bool upper : {true, false}) {
      const int n = 1 + static_cast<int>(uniform(rng, 0.0, 3.0));
      double total = 0.0;
      const std::size_t first = comps.size();
      for (int k = 0; k < n; ++k) {
        const double offset = uniform(rng, -0.2, 0.6);
        const double mean = upper ? theta0 + offset : theta0 - offset;
        const double sd = uniform(rng, 0.02, 0.4);
        const double w = uniform(rng, 0.1, 1.0);
        const double mass_on_side = std_normal_cdf(upper ? (mean - theta0) / sd : (theta0 - mean) / sd);
        comps.push_back({mean, sd, w, mass_on_side, upper});
        total += w;
        breaks.insert(breaks.end(), {mean, mean - sd, mean + sd});
        lo = std::min(lo, mean - 12.0 * sd);
        hi = std::max(hi, mean + 12.0 * sd);
      }
      const double side_weight = upper ? alpha : 1.0 - alpha;
      for (std::size_t k = first; k < comps.size(); ++k) comps[k].weight *= side_weight / total;
    }
    auto density = [comps, theta0](double theta) {
      double d = 0.0;
      for (const auto& c : comps) {
        if (c.upper != (theta >= theta0)) continue;
        d += c.weight * std_normal_pdf((theta - c.mean) / c.sd) / (c.sd * c.norm);
      }
      return d;
    };
    const auto prior = oracle::GenericPrior::continuous(density, lo, hi, breaks);

    const oracle::SplitEvidence split = oracle::split_evidence(prior, model, x, theta0);
    worst_mass_err = std::max(worst_mass_err, std::fabs(split.upper_mass - alpha));
    const double g_prior = split.upper_integral + split.lower_integral;
    const double g_two_point = two_point_marginal(empirical_prior(model, x, theta0, alpha), model, x);
    worst_excess = std::max(worst_excess, g_prior / g_two_point - 1.0);
  }

  bool invariant = true;
  const EvidenceModel mixture = normal_mixture_location(sigma);
  for (const EvidenceModel* m : {&model, &mixture}) {
    for (int i = 0; i <= 40; ++i) {
      const double x = 0.5 + i / 40.0;
      const double v1 = v_nonparam(*m, x, theta0, 0.1).value;
      const double v5 = v_nonparam(*m, x, theta0, 0.5).value;
      const double v9 = v_nonparam(*m, x, theta0, 0.9).value;
      invariant = invariant && v1 == v5 && v5 == v9;
    }
  }

  const bool passed = worst_excess <= 1e-8 && worst_mass_err <= 1e-8 && invariant;
  return {"two-point prior maximizes the marginal likelihood", passed,
          describe("max g_prior/g_two_point - 1 = ", worst_excess, " (tol 1e-8); constraint mass err ",
                   worst_mass_err, "; alpha-invariance ", invariant ? "exact" : "BROKEN")};
}

CheckResult check_prior_probability_caption() {
  const double p_high = NormalPrior(1.2, 0.3).mass_above(1.0);
  const double p_low = NormalPrior(0.8, 0.3).mass_above(1.0);
  const double reference = oracle::reference_normal_cdf(2.0 / 3.0);
  const bool passed = p_high >= 0.74 && p_high <= 0.76 && std::fabs(p_high + p_low - 1.0) <= 1e-15 &&
                      std::fabs(p_high - reference) <= 1e-15;
  return {"prior probability of H_p for mu = 1.2 and 0.8, tau = 0.3", passed,
          describe("P(H_p) = ", p_high, ", mirror ", p_low)};
}

CheckResult check_lambda_identities() {
  const bool zero = lambda_ratio(0.0) == 1.0 && log_lambda_ratio(0.0).value == 0.0;

  double worst = 0.0;
  constexpr int n = 100000;
  for (int i = 0; i <= n; ++i) {
    const double y = -8.0 + 16.0 * i / n;
    worst = std::max(worst, std::fabs(lambda_ratio(y) * lambda_ratio(-y) - 1.0));
  }

  bool monotone = true;
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 60000; ++i) {
    const double y = -300.0 + 600.0 * i / 60000.0;
    const double v = log_lambda_ratio(y).value;
    monotone = monotone && std::isfinite(v) && v > prev;
    prev = v;
  }

  const bool passed = zero && worst <= 1e-10 && monotone;
  return {"Lambda identities", passed,
          describe("Lambda(0) = 1: ", zero ? "yes" : "no", "; max |L(y)L(-y) - 1| ", worst,
                   " (tol 1e-10); log form finite and increasing on [-300, 300]: ", monotone ? "yes" : "no")};
}

std::vector<CheckResult> run_all() {
  return {check_nonparam_closed_form(),  check_known_prior_vs_quadrature(), check_balanced_exactness(),
          check_unbalanced_structure(),  check_cubic_sign_identity(),       check_two_point_optimality(),
          check_prior_probability_caption(), check_lambda_identities()};
}

}  // namespace fse::verify
