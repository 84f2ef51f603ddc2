#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fse/errors.hpp"
#include "fse/normal.hpp"
#include "fse/oracle.hpp"
#include "fse/parametric.hpp"

using namespace fse;

namespace {
const double kPhi0 = 0.3989422804014327;
double phi(double t) { return kPhi0 * std::exp(-0.5 * t * t); }
}  // namespace

TEST_CASE("marginal density") {
  CHECK(marginal_density(1.3, NormalPrior(1.0, 0.0), 0.1) == doctest::Approx(phi(3.0) / 0.1).epsilon(1e-13));
  CHECK(marginal_density(0.0, NormalPrior(0.0, 1.0), 1.0) == doctest::Approx(kPhi0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(marginal_density(1.2, NormalPrior(1.0, 0.3), 0.1) == doctest::Approx(1.0328830949345566406).epsilon(1e-14));

  // Quadrature of f(x|theta) pi(theta).
  const double quad = oracle::marginal_by_integration(oracle::GenericPrior::normal(1.0, 0.3), NormalLocationModel(0.1), 1.2);
  CHECK(quad == doctest::Approx(marginal_density(1.2, NormalPrior(1.0, 0.3), 0.1)).epsilon(1e-10));
}

TEST_CASE("prior validation") {
  CHECK_THROWS_AS(NormalPrior(0.0, -0.1), DomainError);
  CHECK_THROWS_AS(QuantileConstraint(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(QuantileConstraint(1.0, 1.5), DomainError);
}

TEST_CASE("partial integrals") {
  const NormalPrior prior(1.2, 0.3);
  const PartialIntegrals p = partial_integrals(1.0, prior, 0.1, 1.0);
  CHECK(p.lower_mass + p.upper_mass == doctest::Approx(marginal_density(1.0, prior, 0.1)).epsilon(1e-12));
  CHECK(p.lower_mass == doctest::Approx(0.43021073095746452961).epsilon(1e-13));
  CHECK(p.upper_mass == doctest::Approx(0.60267236397709211099).epsilon(1e-13));

  const oracle::SplitEvidence q =
      oracle::split_evidence(oracle::GenericPrior::normal(1.2, 0.3), NormalLocationModel(0.1), 1.0, 1.0);
  CHECK(p.lower_mass == doctest::Approx(q.lower_integral).epsilon(1e-10));
  CHECK(p.upper_mass == doctest::Approx(q.upper_integral).epsilon(1e-10));

  // Symmetric configuration splits evenly.
  const PartialIntegrals s = partial_integrals(0.0, NormalPrior(0.0, 0.5), 0.2, 0.0);
  CHECK(s.lower_mass == doctest::Approx(s.upper_mass).epsilon(1e-15));

  // Threshold far below all the mass.
  const PartialIntegrals t = partial_integrals(1.0, NormalPrior(1.0, 0.3), 0.1, 1.0 - 12 * 0.3);
  CHECK(t.log_lower_mass - std::log(marginal_density(1.0, NormalPrior(1.0, 0.3), 0.1)) <= std::log(1e-20));

  CHECK_THROWS_AS(partial_integrals(1.0, NormalPrior(1.0, 0.0), 0.1, 1.0), DomainError);
}

TEST_CASE("known prior") {
  for (double x : {-3.0, 0.4, 1.0, 7.0}) {
    const EvidenceStrength s = v_known_prior(x, NormalPrior(1.3, 0.0), 0.1, 1.0);
    CHECK(s.value == 1.0);
    CHECK(s.log10_value == 0.0);
  }
  CHECK(NormalPrior(1.2, 0.3).mass_above(1.0) == doctest::Approx(0.74750746245307708694).epsilon(1e-14));

  const EvidenceStrength s = v_known_prior(1.0, NormalPrior(1.2, 0.3), 0.1, 1.0);
  CHECK(s.value == doctest::Approx(0.47318726993787318829).epsilon(1e-13));
  CHECK(s.method == Method::known_prior);

  // Ratio of partial integrals over prior masses, computed by quadrature.
  const double quad = oracle::v_by_integration(oracle::GenericPrior::normal(1.2, 0.3), NormalLocationModel(0.1), 1.0, 1.0);
  CHECK(s.value == doctest::Approx(quad).epsilon(1e-8));

  // Extreme x stays finite on the log scale.
  const EvidenceStrength far = v_known_prior(1e4, NormalPrior(1.2, 0.3), 0.1, 1.0);
  CHECK(far.saturated);
  CHECK(std::isfinite(far.log10_value));
}

TEST_CASE("known prior is strictly increasing in x") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int draw = 0; draw < 20; ++draw) {
    const NormalPrior prior(1.0 + u(rng) - 0.5, u(rng));
    const double sigma = u(rng);
    double prev = -1e300;
    for (int i = 0; i <= 200; ++i) {
      const double v = v_known_prior(-1.0 + 4.0 * i / 200.0, prior, sigma, 1.0).log10_value;
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("prior from the quantile constraint") {
  CHECK(prior_from_constraint(QuantileConstraint(1.0, 0.5), 0.7).mu == 1.0);
  const NormalPrior p = prior_from_constraint(QuantileConstraint(1.0, 0.75), 0.3);
  CHECK(p.mu == doctest::Approx(1.202346925058824523).epsilon(1e-14));
  CHECK(std_normal_cdf((1.0 - p.mu) / 0.3) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(p.mu > 1.0);
  CHECK(prior_from_constraint(QuantileConstraint(1.0, 0.75), 0.0).mu == 1.0);
  CHECK_THROWS_AS(prior_from_constraint(QuantileConstraint(1.0, 0.3), 0.2), DomainError);
  CHECK_THROWS_AS(prior_from_constraint(QuantileConstraint(1.0, 0.7), -0.2), DomainError);
}

TEST_CASE("balanced tau_hat") {
  CHECK(tau_hat_balanced(1.0, 1.0, 0.1) == 0.0);
  CHECK(tau_hat_balanced(1.125, 1.0, 0.125) == 0.0);
  CHECK(tau_hat_balanced(1.2, 1.0, 0.1) == doctest::Approx(std::sqrt(0.03)).epsilon(1e-14));
  auto g = [](double tau) { return marginal_density(1.2, NormalPrior(1.0, tau), 0.1); };
  CHECK(oracle::maximize_likelihood_grid(g, 2.0).arg_max == doctest::Approx(std::sqrt(0.03)).epsilon(1e-9));
}

TEST_CASE("balanced strength") {
  for (double x : {0.875, 0.9, 1.0, 1.05, 1.125}) {
    const EvidenceStrength s = v_balanced(x, 1.0, 0.125);
    CHECK(s.value == 1.0);
    CHECK(s.in_flat_region);
  }
  const EvidenceStrength s = v_balanced(1.2, 1.0, 0.1);
  CHECK(s.value == doctest::Approx(lambda_ratio(std::sqrt(3.0))).epsilon(1e-12));
  CHECK(s.value == doctest::Approx(23.0).epsilon(1e-3));
  CHECK_FALSE(s.in_flat_region);
  CHECK(v_balanced(0.8, 1.0, 0.1).value == doctest::Approx(1.0 / s.value).epsilon(1e-12));

  // Quadrature of the Bayes factor at the fitted tau.
  const double quad = oracle::v_by_integration(oracle::GenericPrior::normal(1.0, std::sqrt(0.03)), NormalLocationModel(0.1), 1.2, 1.0);
  CHECK(s.value == doctest::Approx(quad).epsilon(1e-8));

  // Dyadic grid so that x - theta0 is exact on both sides.
  for (int i = 0; i <= 128; ++i) {
    const double d = i / 256.0;
    CHECK(std::fabs(v_balanced(1.0 + d, 1.0, 0.125).log10_value + v_balanced(1.0 - d, 1.0, 0.125).log10_value) <= 1e-12);
  }
}

TEST_CASE("cubic coefficients") {
  const double q = std_normal_quantile(0.25);
  const CubicPoly at_threshold = cubic_coeffs(1.0, 1.0, 0.1, 0.75);
  CHECK(at_threshold.c3 == -1.0);
  CHECK(at_threshold.c2 == 0.0);
  CHECK(at_threshold.c0 == 0.0);
  CHECK(at_threshold.c1 == doctest::Approx(-0.01 * (q * q + 1.0)));
  for (double tau = 0.01; tau < 3.0; tau += 0.01) CHECK(at_threshold(tau) < 0.0);

  const CubicPoly above = cubic_coeffs(2.0, 1.0, 0.1, 0.75);
  CHECK(above.c0 == doctest::Approx(-q * 0.01));
  CHECK(above.c0 > 0.0);
  CHECK(cubic_coeffs(0.7, 1.0, 0.1, 0.75)(0.0) < 0.0);

  CHECK_THROWS_AS(cubic_coeffs(1.0, 1.0, 0.1, 0.5), DomainError);
  CHECK_THROWS_AS(cubic_coeffs(1.0, 1.0, 0.1, 0.3), DomainError);
}

TEST_CASE("derivative views") {
  const CubicPoly p = cubic_coeffs(1.3, 1.0, 0.1, 0.8);
  for (double tau : {0.0, 0.05, 0.2, 1.0}) {
    const double h = 1e-6;
    CHECK(p.derivative(tau) == doctest::Approx((p(tau + h) - p(tau - h)) / (2 * h)).epsilon(1e-6));
    CHECK(p.second_derivative(tau) == doctest::Approx((p.derivative(tau + h) - p.derivative(tau - h)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("cubic real roots") {
  // (t - 1)(t - 2)(t - 3) with leading -1: -t^3 + 6t^2 - 11t + 6.
  CubicPoly three{-1.0, 6.0, -11.0, 6.0};
  const auto r = three.real_roots();
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r[2] == doctest::Approx(3.0).epsilon(1e-14));

  CubicPoly one{-1.0, 0.0, -1.0, 2.0};  // -(t - 1)(t^2 + t + 2)
  const auto s = one.real_roots();
  REQUIRE(s.size() == 1);
  CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-14));

  CubicPoly triple{-1.0, 0.0, 0.0, 0.0};
  CHECK(triple.real_roots() == std::vector<double>{0.0});

  // Random cubics: every returned root is a root.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    CubicPoly p{-1.0, u(rng), u(rng), u(rng)};
    for (double root : p.real_roots()) {
      const double scale = std::fabs(root * root * root) + std::fabs(p.c2 * root * root) + std::fabs(p.c1 * root) + std::fabs(p.c0);
      CHECK(std::fabs(p(root)) <= 1e-13 * scale + 1e-300);
    }
  }
}

TEST_CASE("sign of P matches a finite-difference derivative of the likelihood") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(0.7, 1.3), ut(0.02, 0.5), ua(0.55, 0.9);
  int checked = 0;
  while (checked < 40) {
    const double x = ux(rng), tau = ut(rng), alpha = ua(rng);
    const CubicPoly p = cubic_coeffs(x, 1.0, 0.1, alpha);
    if (std::fabs(p(tau)) < 1e-5) continue;
    const double h = 1e-7;
    const double fd = (constrained_likelihood(x, 1.0, 0.1, alpha, tau + h) - constrained_likelihood(x, 1.0, 0.1, alpha, tau - h)) / (2 * h);
    if (std::fabs(fd) < 1e-6) continue;
    CHECK((fd > 0) == (p(tau) > 0));
    ++checked;
  }
}

TEST_CASE("unbalanced tau_hat") {
  CHECK(tau_hat_unbalanced(1.0, 1.0, 0.1, 0.75) == 0.0);

  // Close enough to theta0 on the left that P' has no roots.
  const double q = std_normal_quantile(0.25);
  const double radius = 0.1 * std::sqrt(3.0 * (q * q + 1.0) / (q * q + 3.0));
  for (int i = 1; i < 50; ++i) {
    CHECK(tau_hat_unbalanced(1.0 - radius * i / 50.0, 1.0, 0.1, 0.75) == 0.0);
  }

  auto g = [](double tau) { return constrained_likelihood(1.3, 1.0, 0.1, 0.75, tau); };
  const double bracket = 20.0 * 0.1 * (1.0 + std::fabs(q));
  CHECK(tau_hat_unbalanced(1.3, 1.0, 0.1, 0.75) ==
        doctest::Approx(oracle::maximize_likelihood_grid(g, bracket).arg_max).epsilon(1e-8));

  CHECK_THROWS_AS(tau_hat_unbalanced(1.0, 1.0, 0.1, 0.5), DomainError);
}

TEST_CASE("unbalanced tau_hat agrees with the grid oracle across x") {
  for (double alpha : {0.55, 0.75, 0.9}) {
    const double q = std_normal_quantile(1.0 - alpha);
    for (int i = 0; i <= 60; ++i) {
      const double x = 0.4 + 1.2 * i / 60.0;
      auto g = [&](double tau) { return constrained_likelihood(x, 1.0, 0.1, alpha, tau); };
      const double grid = oracle::maximize_likelihood_grid(g, 20.0 * 0.1 * (1.0 + std::fabs(q)) + 2.0 * std::fabs(x - 1.0)).arg_max;
      CHECK(tau_hat_unbalanced(x, 1.0, 0.1, alpha) == doctest::Approx(grid).epsilon(1e-7));
    }
  }
}

TEST_CASE("tau_hat is continuous above the threshold") {
  double prev = tau_hat_unbalanced(1.0, 1.0, 0.1, 0.75);
  const double step = 0.5 / 1000.0;
  for (int i = 1; i <= 1000; ++i) {
    const double t = tau_hat_unbalanced(1.0 + step * i, 1.0, 0.1, 0.75);
    // d tau_hat / dx stays O(1) above theta0.
    CHECK(std::fabs(t - prev) <= 5.0 * step);
    prev = t;
  }
}

TEST_CASE("unbalanced strength") {
  const EvidenceStrength s = v_unbalanced(1.5, 1.0, 0.1, 0.75);
  const double tau = *s.tau_hat;
  const double mu = *s.mu_hat;
  const double quad = oracle::v_by_integration(oracle::GenericPrior::normal(mu, tau), NormalLocationModel(0.1), 1.5, 1.0);
  CHECK(s.value == doctest::Approx(quad).epsilon(1e-8));
  CHECK(s.value == doctest::Approx(1134244.14392).epsilon(1e-10));

  // Reflection: alpha < 0.5 mirrors about theta0.
  const EvidenceStrength r = v_unbalanced(0.5, 1.0, 0.1, 0.25);
  CHECK(r.value == doctest::Approx(1.0 / s.value).epsilon(1e-12));
  // and the mirrored prior evaluated directly by quadrature on the unreflected problem.
  const double quad_reflected =
      oracle::v_by_integration(oracle::GenericPrior::normal(*r.mu_hat, *r.tau_hat), NormalLocationModel(0.1), 0.5, 1.0);
  CHECK(r.value == doctest::Approx(quad_reflected).epsilon(1e-8));
  CHECK(NormalPrior(*r.mu_hat, *r.tau_hat).mass_above(1.0) == doctest::Approx(0.25).epsilon(1e-12));

  // alpha = 0.5 uses the balanced form.
  CHECK(v_unbalanced(1.2, 1.0, 0.1, 0.5).value == v_balanced(1.2, 1.0, 0.1).value);
  CHECK(v_unbalanced(1.2, 1.0, 0.1, 0.5).method == Method::unbalanced);
}

TEST_CASE("flat interval for alpha > 0.5") {
  for (double alpha : {0.55, 0.75}) {
    const double x0 = flat_left_endpoint(1.0, 0.1, alpha);
    CHECK(x0 < 1.0);
    CHECK(tau_hat_unbalanced(x0, 1.0, 0.1, alpha) == 0.0);
    CHECK(tau_hat_unbalanced(x0 - 1e-9, 1.0, 0.1, alpha) > 0.0);
    for (int i = 0; i <= 200; ++i) {
      const EvidenceStrength s = v_unbalanced(x0 + 1e-8 + (1.0 - x0 - 1e-8) * i / 200.0, 1.0, 0.1, alpha);
      CHECK(s.value == 1.0);
      CHECK(s.in_flat_region);
    }
    // The flat set does not extend past theta0.
    CHECK(v_unbalanced(1.0 + 1e-4, 1.0, 0.1, alpha).value > 1.0);
  }
  CHECK(flat_left_endpoint(1.0, 0.1, 0.55) == doctest::Approx(0.86996198551616982).epsilon(1e-10));
  CHECK(flat_left_endpoint(1.0, 0.1, 0.75) == doctest::Approx(0.80573571637345461).epsilon(1e-10));
  CHECK_THROWS_AS(flat_left_endpoint(1.0, 0.1, 0.5), DomainError);
}

TEST_CASE("flat interval scales with sigma and shifts with theta0") {
  const double base = flat_left_endpoint(0.0, 1.0, 0.75);
  CHECK(flat_left_endpoint(5.0, 2.0, 0.75) == doctest::Approx(5.0 + 2.0 * base).epsilon(1e-9));
}
