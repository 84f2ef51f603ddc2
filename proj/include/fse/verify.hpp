#pragma once

#include <string>
#include <vector>

// Closed form vs oracle cross-checks. Each check is deterministic (fixed seeds)
// and reports what it measured in `detail`.

namespace fse::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

CheckResult check_nonparam_closed_form();
CheckResult check_known_prior_vs_quadrature();
CheckResult check_balanced_exactness();
CheckResult check_unbalanced_structure();
CheckResult check_cubic_sign_identity();
CheckResult check_two_point_optimality();
CheckResult check_prior_probability_caption();
CheckResult check_lambda_identities();

/// All of the above, in order.
std::vector<CheckResult> run_all();

/// Left ends of the flat interval for theta0 = 1, sigma = 0.1, from a 40-digit
/// bisection on an independent multiprecision evaluation of the cubic.
inline constexpr double kFlatLeftEndpointAlpha055 = 0.86996198551616982;
inline constexpr double kFlatLeftEndpointAlpha075 = 0.80573571637345461;

/// V(x0 - 1e-4) for the same configurations.
inline constexpr double kJumpValueAlpha055 = 0.2641068281;
inline constexpr double kJumpValueAlpha075 = 0.0254392869348;

}  // namespace fse::verify
