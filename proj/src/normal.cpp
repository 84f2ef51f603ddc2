#include "fse/normal.hpp"

#include <cmath>
#include <limits>

#include "fse/errors.hpp"

namespace fse {
namespace {

constexpr double kSqrt1_2 = 0.707106781186547524400844362105;

// Below this, erfc loses nothing yet but the continued fraction is already
// converging quickly, and it keeps working long after erfc underflows.
constexpr double kTailSwitch = -6.0;

// Mills ratio R(z) = Phi(-z)/phi(z) for z > 0, as the Laplace continued fraction
//   R(z) = 1/(z + 1/(z + 2/(z + 3/(z + ...))))
// evaluated with the modified Lentz algorithm.
double mills_ratio(double z) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  double f = z;
  double c = z;
  double d = 0.0;
  for (int n = 1; n < 5000; ++n) {
    const double an = static_cast<double>(n);
    d = z + an * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = z + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < eps) break;
  }
  return 1.0 / f;
}

}  // namespace

double std_normal_pdf(double y) {
  detail::require_finite(y, "y");
  return kInvSqrt2Pi * std::exp(-0.5 * y * y);
}

double std_normal_log_pdf(double y) {
  detail::require_finite(y, "y");
  return -0.5 * y * y - kHalfLog2Pi;
}

double std_normal_cdf(double y) {
  detail::require_finite(y, "y");
  return 0.5 * std::erfc(-y * kSqrt1_2);
}

double std_normal_log_cdf(double y) {
  detail::require_finite(y, "y");
  if (y > 0.0) {
    return std::log1p(-0.5 * std::erfc(y * kSqrt1_2));
  }
  if (y >= kTailSwitch) {
    return std::log(0.5 * std::erfc(-y * kSqrt1_2));
  }
  return std_normal_log_pdf(y) + std::log(mills_ratio(-y));
}

double std_normal_quantile(double u) {
  detail::require_probability(u, "u");
  if (u == 0.5) return 0.0;
  if (u > 0.5) {
    // 1 - u is exact on [0.5, 1).
    return -std_normal_quantile(1.0 - u);
  }

  const double target = std::log(u);
  double hi = 0.0;
  double lo = -1.0;
  while (std_normal_log_cdf(lo) > target) {
    hi = lo;
    lo *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-9 * (1.0 + std::fabs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std_normal_log_cdf(mid) > target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  // Newton on ln Phi(q) = ln u; d/dq ln Phi = phi/Phi.
  double q = 0.5 * (lo + hi);
  for (int i = 0; i < 3; ++i) {
    const double log_cdf = std_normal_log_cdf(q);
    const double slope = std::exp(std_normal_log_pdf(q) - log_cdf);
    const double step = (log_cdf - target) / slope;
    q -= step;
    if (std::fabs(step) <= 1e-16 * (1.0 + std::fabs(q))) break;
  }
  return q;
}

LogOdds log_lambda_ratio(double y) {
  detail::require_finite(y, "y");
  if (y == 0.0) return LogOdds{0.0};
  // Evaluate the tail side accurately and mirror: ln Lambda(-y) = -ln Lambda(y).
  const double a = std::fabs(y);
  const double value = std_normal_log_cdf(a) - std_normal_log_cdf(-a);
  return LogOdds{y > 0.0 ? value : -value};
}

double lambda_ratio(double y) {
  detail::require_finite(y, "y");
  if (std::fabs(y) < 30.0) {
    return std_normal_cdf(y) / std_normal_cdf(-y);
  }
  const double log_value = log_lambda_ratio(y).value;
  if (log_value > std::log(std::numeric_limits<double>::max())) {
    throw OverflowError("lambda_ratio: value overflows double; use log_lambda_ratio");
  }
  return std::exp(log_value);
}

}  // namespace fse
