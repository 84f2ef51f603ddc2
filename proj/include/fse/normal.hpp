#pragma once

// Standard normal special functions and the odds-of-CDF function
// Lambda(y) = Phi(y) / Phi(-y), with tail-stable logarithmic forms.

namespace fse {

/// Natural-log odds. Negation corresponds to taking the reciprocal odds.
struct LogOdds {
  double value = 0.0;

  constexpr LogOdds operator-() const { return LogOdds{-value}; }
  friend constexpr LogOdds operator-(LogOdds a, LogOdds b) { return LogOdds{a.value - b.value}; }
  friend constexpr LogOdds operator+(LogOdds a, LogOdds b) { return LogOdds{a.value + b.value}; }
  friend constexpr auto operator<=>(const LogOdds&, const LogOdds&) = default;
};

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
inline constexpr double kHalfLog2Pi = 0.918938533204672741780329736406;

double std_normal_pdf(double y);

/// ln phi(y); finite for every finite y.
double std_normal_log_pdf(double y);

/// Phi(y). Underflows to 0 below y ~ -38.5; use std_normal_log_cdf there.
double std_normal_cdf(double y);

/// ln Phi(y), relative accuracy ~1e-14 down to y = -300 and beyond.
double std_normal_log_cdf(double y);

/// Phi^{-1}(u) for u in (0, 1).
double std_normal_quantile(double u);

/// Lambda(y) = Phi(y)/Phi(-y). Throws OverflowError beyond double range.
double lambda_ratio(double y);

/// ln Lambda(y) = ln Phi(y) - ln Phi(-y). Finite for every finite y.
LogOdds log_lambda_ratio(double y);

}  // namespace fse
