#include "fse/models.hpp"

#include <cmath>
#include <string>
#include <type_traits>
#include <utility>

#include "fse/errors.hpp"
#include "fse/normal.hpp"
#include "grid_search.hpp"

namespace fse {
namespace {

constexpr std::size_t kGridPoints = 4097;

// Strict positivity is required on the search window; outside it the kernel may underflow to 0.
double checked_kernel(const Kernel& k, double t, bool strict) {
  const double v = k(t);
  if (!std::isfinite(v) || v < 0.0 || (strict && v == 0.0)) {
    throw ModelError("kernel is not " + std::string(strict ? "strictly positive" : "nonnegative") +
                     " and finite at t = " + std::to_string(t));
  }
  return v;
}

// Probes k on a grid over [-w, w]: strictly positive there and integrating to ~1.
void validate_kernel(const Kernel& k, double w) {
  if (!k) throw DomainError("kernel must be callable");
  detail::require_finite(w, "search_halfwidth");
  if (!(w > 0.0)) throw DomainError("degenerate search window: search_halfwidth must be > 0");

  constexpr int intervals = 4096;
  const double h = 2.0 * w / intervals;
  double sum = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double weight = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += weight * checked_kernel(k, -w + h * i, true);
  }
  const double mass = sum * h / 3.0;
  if (std::fabs(mass - 1.0) > 1e-3) {
    throw ModelError("kernel mass on the search window is " + std::to_string(mass) + ", expected ~1");
  }
}

double refine_tol(double from, double to) { return 1e-12 * (1.0 + std::fabs(from) + std::fabs(to)); }

Supremum finish(detail::GridMax best, double arg, bool at_boundary) {
  return {best.value, std::log(best.value), arg, at_boundary};
}

Supremum sup_normal(const NormalLocationModel& m, double x, double theta0, Side side) {
  const bool interior = side == Side::upper ? x >= theta0 : x < theta0;
  const double arg = interior ? x : theta0;
  const double z = (x - arg) / m.sigma;
  const double log_value = std_normal_log_pdf(z) - std::log(m.sigma);
  return {std::exp(log_value), log_value, arg, !interior};
}

Supremum sup_location(const LocationFamily& m, double x, double theta0, Side side) {
  const double w = m.search_halfwidth();
  auto objective = [&](double theta) { return m.kernel(x - theta); };
  double lo = 0.0;
  double hi = 0.0;
  if (side == Side::upper) {
    lo = std::fmax(theta0, x - w);
    hi = std::fmax(theta0, x + w);
  } else {
    lo = std::fmin(theta0, x - w);
    hi = std::fmin(theta0, x + w);
  }
  auto best = detail::grid_golden_maximize(objective, lo, hi, kGridPoints, refine_tol(lo, hi));
  return finish(best, best.arg, best.arg == theta0);
}

Supremum sup_scale(const ScaleFamily& m, double x, double theta0, Side side) {
  detail::require_positive(theta0, "theta0");
  if (x == 0.0) {
    throw DomainError("scale family: x = 0 is outside the domain (the lower supremum is unbounded)");
  }
  const double w = m.search_halfwidth();
  const double r = x / theta0;
  const double abs_x = std::fabs(x);
  auto objective = [&](double t) { return std::fabs(t) * m.kernel(t) / abs_x; };

  // Grid runs from the end with the smallest theta = x/t so ties resolve there.
  double from = 0.0;
  double to = 0.0;
  if (x > 0.0) {
    if (side == Side::upper) {
      from = std::fmin(r, w);
      to = 0.0;
    } else {
      from = std::fmax(r, w);
      to = r;
    }
  } else {
    if (side == Side::upper) {
      from = std::fmax(r, -w);
      to = 0.0;
    } else {
      from = std::fmin(r, -w);
      to = r;
    }
  }
  auto best = detail::grid_golden_maximize(objective, from, to, kGridPoints, refine_tol(from, to));
  const bool at_boundary = best.arg == r;
  const double theta = at_boundary ? theta0 : x / best.arg;
  return finish(best, theta, at_boundary);
}

}  // namespace

NormalLocationModel::NormalLocationModel(double s) : sigma(s) { detail::require_positive(s, "sigma"); }

LocationFamily::LocationFamily(Kernel kernel, double search_halfwidth)
    : kernel_(std::move(kernel)), halfwidth_(search_halfwidth) {
  validate_kernel(kernel_, halfwidth_);
}

double LocationFamily::kernel(double t) const { return checked_kernel(kernel_, t, false); }

ScaleFamily::ScaleFamily(Kernel kernel, double search_halfwidth)
    : kernel_(std::move(kernel)), halfwidth_(search_halfwidth) {
  validate_kernel(kernel_, halfwidth_);
}

double ScaleFamily::kernel(double t) const { return checked_kernel(kernel_, t, false); }

LocationFamily normal_location_kernel(double sigma) {
  detail::require_positive(sigma, "sigma");
  return LocationFamily([sigma](double t) { return std_normal_pdf(t / sigma) / sigma; },
                        kDefaultHalfwidthUnits * sigma);
}

LocationFamily normal_mixture_location(double sigma, double separation, double weight) {
  detail::require_positive(sigma, "sigma");
  detail::require_positive(separation, "separation");
  detail::require_probability(weight, "weight");
  auto k = [sigma, separation, weight](double t) {
    const double z = t / sigma;
    return (weight * std_normal_pdf(z + separation) + (1.0 - weight) * std_normal_pdf(z - separation)) / sigma;
  };
  return LocationFamily(k, kDefaultHalfwidthUnits * sigma);
}

ScaleFamily normal_scale() {
  return ScaleFamily([](double t) { return std_normal_pdf(t); }, kDefaultHalfwidthUnits);
}

double density_at(const EvidenceModel& model, double x, double theta) {
  detail::require_finite(x, "x");
  detail::require_finite(theta, "theta");
  return std::visit(
      [&](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, NormalLocationModel>) {
          return std_normal_pdf((x - theta) / m.sigma) / m.sigma;
        } else if constexpr (std::is_same_v<M, LocationFamily>) {
          return m.kernel(x - theta);
        } else {
          if (!(theta > 0.0)) throw DomainError("scale family requires theta > 0");
          return m.kernel(x / theta) / theta;
        }
      },
      model);
}

Supremum sup_density(const EvidenceModel& model, double x, double theta0, Side side) {
  detail::require_finite(x, "x");
  detail::require_finite(theta0, "theta0");
  return std::visit(
      [&](const auto& m) -> Supremum {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, NormalLocationModel>) {
          return sup_normal(m, x, theta0, side);
        } else if constexpr (std::is_same_v<M, LocationFamily>) {
          return sup_location(m, x, theta0, side);
        } else {
          return sup_scale(m, x, theta0, side);
        }
      },
      model);
}

}  // namespace fse
