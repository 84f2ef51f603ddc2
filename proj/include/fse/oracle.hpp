#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "fse/models.hpp"
#include "fse/nonparam.hpp"
#include "fse/parametric.hpp"

// Brute-force verifiers: numerical integration of the Bayes-factor ratio over an
// arbitrary prior, and grid search maximization. Nothing here calls the closed forms.

namespace fse::oracle {

struct DiscretePrior {
  std::vector<std::pair<double, double>> points;  // (theta, weight)
};

struct ContinuousPrior {
  std::function<double(double)> density;
  double lower = 0.0;  // support bounds; the density is treated as 0 outside
  double upper = 0.0;
  std::vector<double> breakpoints;
  std::optional<NormalPrior> normal;  // set when the density is N(mu, tau^2)
};

class GenericPrior {
public:
  static GenericPrior discrete(std::vector<std::pair<double, double>> points);
  static GenericPrior continuous(std::function<double(double)> density, double lower, double upper,
                                 std::vector<double> breakpoints = {});
  /// N(mu, tau^2) truncated at mu +- 12 tau; tau = 0 gives a point mass.
  static GenericPrior normal(double mu, double tau);
  static GenericPrior two_point(const TwoPointPrior& prior);

  const std::variant<DiscretePrior, ContinuousPrior>& kind() const { return kind_; }

private:
  explicit GenericPrior(std::variant<DiscretePrior, ContinuousPrior> k) : kind_(std::move(k)) {}
  std::variant<DiscretePrior, ContinuousPrior> kind_;
};

inline constexpr double kDefaultRelTol = 1e-10;

/// Adaptive Simpson on [a, b], split at the given breakpoints, to a relative tolerance.
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = kDefaultRelTol,
                 const std::vector<double>& breakpoints = {});

/// The four ingredients of the Bayes-factor ratio, split at theta0 (theta >= theta0 is "upper").
struct SplitEvidence {
  double upper_integral = 0.0;  // int_{theta >= theta0} f(x|theta) dpi(theta)
  double lower_integral = 0.0;
  double upper_mass = 0.0;  // pi(theta >= theta0)
  double lower_mass = 0.0;
};

SplitEvidence split_evidence(const GenericPrior& prior, const EvidenceModel& model, double x, double theta0,
                             double rel_tol = kDefaultRelTol);

/// V(x) = (upper_integral / upper_mass) / (lower_integral / lower_mass).
/// Throws NumericalError when either prior mass is below 1e-300.
double v_by_integration(const GenericPrior& prior, const EvidenceModel& model, double x, double theta0,
                        double rel_tol = kDefaultRelTol);

/// g(x) = int f(x|theta) dpi(theta).
double marginal_by_integration(const GenericPrior& prior, const EvidenceModel& model, double x,
                               double rel_tol = kDefaultRelTol);

struct LikelihoodMax {
  double arg_max = 0.0;
  double max_value = 0.0;
};

inline constexpr std::size_t kOracleGridPoints = 4097;

/// Maximize a function of tau >= 0 over [0, bracket_max]: 4097-point grid, golden-section
/// refinement in the best bracket, then a central-difference Newton polish.
/// Returns exactly 0 when the grid maximum is at the left end.
LikelihoodMax maximize_likelihood_grid(const std::function<double(double)>& objective, double bracket_max);

/// Phi(y) from its Taylor series, Phi(y) = 1/2 + phi(y) sum_n y^(2n+1)/(2n+1)!!, summed in
/// long double. Independent of the erfc path; |y| <= 6 only.
double reference_normal_cdf(double y);

/// Sign of the central difference (one-sided at the left edge of tau >= 0), with
/// |difference quotient| <= 1e-12 mapped to 0.
int finite_difference_sign(const std::function<double(double)>& objective, double at, double step);

}  // namespace fse::oracle
