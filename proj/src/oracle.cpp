#include "fse/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <type_traits>

#include "fse/errors.hpp"
#include "fse/normal.hpp"
#include "grid_search.hpp"

namespace fse::oracle {
namespace {

constexpr int kPanelsPerSegment = 32;
constexpr int kMaxDepth = 50;
constexpr double kMinPriorMass = 1e-300;
constexpr double kTruncation = 12.0;

struct Panel {
  double a, b, fa, fm, fb, whole;
};

double simpson(double a, double b, double fa, double fm, double fb) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

double adaptive(const std::function<double(double)>& f, const Panel& p, double eps, int depth) {
  const double m = 0.5 * (p.a + p.b);
  const double lm = 0.5 * (p.a + m);
  const double rm = 0.5 * (m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, m, p.fa, flm, p.fm);
  const double right = simpson(m, p.b, p.fm, frm, p.fb);
  const double diff = left + right - p.whole;
  if (depth <= 0 || std::fabs(diff) <= 15.0 * eps) {
    return left + right + diff / 15.0;
  }
  return adaptive(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * eps, depth - 1) +
         adaptive(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * eps, depth - 1);
}

double checked_eval(const std::function<double(double)>& f, double t) {
  const double v = f(t);
  if (!std::isfinite(v)) throw NumericalError("integrand is not finite at " + std::to_string(t));
  return v;
}

double posterior_mean(double x, double sigma, const NormalPrior& p) {
  const double s2 = sigma * sigma;
  const double t2 = p.tau * p.tau;
  return (t2 * x + s2 * p.mu) / (s2 + t2);
}

double posterior_sd(double sigma, const NormalPrior& p) { return sigma * p.tau / std::hypot(sigma, p.tau); }

void add_normal_breakpoints(std::vector<double>& out, double center, double scale) {
  for (double k : {0.0, 1.0, -1.0, 3.0, -3.0, 6.0, -6.0}) out.push_back(center + k * scale);
}

struct Window {
  double lower, upper;
  std::vector<double> breakpoints;
};

// Region carrying f(x|theta) pi(theta): the prior support, narrowed to 12 posterior
// standard deviations beyond the posterior mean and theta0 for normal products.
Window integrand_window(const ContinuousPrior& prior, const EvidenceModel& model, double x, double theta0) {
  Window w{prior.lower, prior.upper, prior.breakpoints};
  if (const auto* normal_model = std::get_if<NormalLocationModel>(&model)) {
    add_normal_breakpoints(w.breakpoints, x, normal_model->sigma);
    if (prior.normal && prior.normal->tau > 0.0) {
      const double m = posterior_mean(x, normal_model->sigma, *prior.normal);
      const double s = posterior_sd(normal_model->sigma, *prior.normal);
      add_normal_breakpoints(w.breakpoints, m, s);
      w.lower = std::fmax(w.lower, std::fmin(theta0, m) - kTruncation * s);
      w.upper = std::fmin(w.upper, std::fmax(theta0, m) + kTruncation * s);
    }
  } else if (std::holds_alternative<LocationFamily>(model)) {
    w.breakpoints.push_back(x);
  }
  return w;
}

}  // namespace

GenericPrior GenericPrior::discrete(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw DomainError("discrete prior needs at least one point");
  double total = 0.0;
  for (const auto& [theta, weight] : points) {
    detail::require_finite(theta, "theta");
    detail::require_finite(weight, "weight");
    if (weight < 0.0) throw DomainError("discrete prior weights must be nonnegative");
    total += weight;
  }
  if (std::fabs(total - 1.0) > 1e-12) throw DomainError("discrete prior weights must sum to 1");
  return GenericPrior(DiscretePrior{std::move(points)});
}

GenericPrior GenericPrior::continuous(std::function<double(double)> density, double lower, double upper,
                                      std::vector<double> breakpoints) {
  if (!density) throw DomainError("continuous prior needs a density");
  detail::require_finite(lower, "lower");
  detail::require_finite(upper, "upper");
  if (!(lower < upper)) throw DomainError("continuous prior support must satisfy lower < upper");
  return GenericPrior(ContinuousPrior{std::move(density), lower, upper, std::move(breakpoints), std::nullopt});
}

GenericPrior GenericPrior::normal(double mu, double tau) {
  const NormalPrior p(mu, tau);
  if (tau == 0.0) return discrete({{mu, 1.0}});
  std::vector<double> breaks;
  add_normal_breakpoints(breaks, mu, tau);
  ContinuousPrior c{[mu, tau](double theta) { return std_normal_pdf((theta - mu) / tau) / tau; },
                    mu - kTruncation * tau, mu + kTruncation * tau, std::move(breaks), p};
  return GenericPrior(std::move(c));
}

GenericPrior GenericPrior::two_point(const TwoPointPrior& prior) {
  return discrete({{prior.theta_p, prior.weight_p}, {prior.theta_d, prior.weight_d}});
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 const std::vector<double>& breakpoints) {
  if (!(a < b)) return 0.0;
  std::vector<double> nodes{a, b};
  for (double t : breakpoints) {
    if (t > a && t < b) nodes.push_back(t);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  std::vector<Panel> panels;
  for (std::size_t s = 0; s + 1 < nodes.size(); ++s) {
    const double h = (nodes[s + 1] - nodes[s]) / kPanelsPerSegment;
    double fa = checked_eval(f, nodes[s]);
    for (int i = 0; i < kPanelsPerSegment; ++i) {
      const double pa = nodes[s] + h * i;
      const double pb = i + 1 == kPanelsPerSegment ? nodes[s + 1] : pa + h;
      const double fm = checked_eval(f, 0.5 * (pa + pb));
      const double fb = checked_eval(f, pb);
      panels.push_back({pa, pb, fa, fm, fb, simpson(pa, pb, fa, fm, fb)});
      fa = fb;
    }
  }

  const double rough = std::accumulate(panels.begin(), panels.end(), 0.0,
                                       [](double acc, const Panel& p) { return acc + p.whole; });
  if (rough == 0.0) return 0.0;
  const double tol = rel_tol * std::fabs(rough);
  double total = 0.0;
  for (const Panel& p : panels) {
    total += adaptive(f, p, tol * (p.b - p.a) / (b - a), kMaxDepth);
  }
  return total;
}

SplitEvidence split_evidence(const GenericPrior& prior, const EvidenceModel& model, double x, double theta0,
                             double rel_tol) {
  detail::require_finite(x, "x");
  detail::require_finite(theta0, "theta0");
  return std::visit(
      [&](const auto& p) -> SplitEvidence {
        using P = std::decay_t<decltype(p)>;
        SplitEvidence out;
        if constexpr (std::is_same_v<P, DiscretePrior>) {
          for (const auto& [theta, weight] : p.points) {
            if (weight == 0.0) continue;
            const double term = weight * density_at(model, x, theta);
            if (theta >= theta0) {
              out.upper_integral += term;
              out.upper_mass += weight;
            } else {
              out.lower_integral += term;
              out.lower_mass += weight;
            }
          }
        } else {
          auto integrand = [&](double theta) {
            const double prior_density = p.density(theta);
            return prior_density == 0.0 ? 0.0 : density_at(model, x, theta) * prior_density;
          };
          const Window w = integrand_window(p, model, x, theta0);
          out.lower_integral = integrate(integrand, w.lower, std::fmin(theta0, w.upper), rel_tol, w.breakpoints);
          out.upper_integral = integrate(integrand, std::fmax(theta0, w.lower), w.upper, rel_tol, w.breakpoints);
          out.lower_mass = integrate(p.density, p.lower, std::fmin(theta0, p.upper), rel_tol, p.breakpoints);
          out.upper_mass = integrate(p.density, std::fmax(theta0, p.lower), p.upper, rel_tol, p.breakpoints);
        }
        return out;
      },
      prior.kind());
}

double v_by_integration(const GenericPrior& prior, const EvidenceModel& model, double x, double theta0,
                        double rel_tol) {
  const SplitEvidence e = split_evidence(prior, model, x, theta0, rel_tol);
  if (e.upper_mass < kMinPriorMass || e.lower_mass < kMinPriorMass) {
    throw NumericalError("v_by_integration: prior mass on one side of theta0 is below 1e-300; odds undefined");
  }
  if (e.lower_integral == 0.0) {
    throw NumericalError("v_by_integration: lower integral vanished numerically");
  }
  return (e.upper_integral / e.upper_mass) / (e.lower_integral / e.lower_mass);
}

double marginal_by_integration(const GenericPrior& prior, const EvidenceModel& model, double x, double rel_tol) {
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, DiscretePrior>) {
          double g = 0.0;
          for (const auto& [theta, weight] : p.points) {
            if (weight != 0.0) g += weight * density_at(model, x, theta);
          }
          return g;
        } else {
          auto integrand = [&](double theta) {
            const double prior_density = p.density(theta);
            return prior_density == 0.0 ? 0.0 : density_at(model, x, theta) * prior_density;
          };
          const Window w = integrand_window(p, model, x, 0.5 * (p.lower + p.upper));
          return integrate(integrand, p.lower, p.upper, rel_tol, w.breakpoints);
        }
      },
      prior.kind());
}

LikelihoodMax maximize_likelihood_grid(const std::function<double(double)>& objective, double bracket_max) {
  detail::require_positive(bracket_max, "bracket_max");
  auto f = [&](double t) {
    const double v = objective(t);
    if (!std::isfinite(v)) throw NumericalError("objective is not finite at " + std::to_string(t));
    return v;
  };

  const double grid_step = bracket_max / static_cast<double>(kOracleGridPoints - 1);
  std::size_t best = 0;
  double best_value = f(0.0);
  for (std::size_t i = 1; i < kOracleGridPoints; ++i) {
    const double v = f(grid_step * static_cast<double>(i));
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }
  if (best == 0) return {0.0, best_value};

  const double lo = grid_step * static_cast<double>(best - 1);
  const double hi = std::fmin(bracket_max, grid_step * static_cast<double>(best + 1));
  double arg = detail::golden_maximize(f, lo, hi, 1e-10);
  double value = f(arg);
  if (value < best_value) {
    arg = grid_step * static_cast<double>(best);
    value = best_value;
  }

  // Golden section stalls where the peak is flat to rounding; finish with Newton
  // steps on central differences.
  const double h = 1e-3 * grid_step;
  for (int i = 0; i < 2; ++i) {
    if (arg - h < 0.0) break;
    const double fp = f(arg + h);
    const double fm = f(arg - h);
    const double curvature = fp - 2.0 * value + fm;
    if (!(curvature < 0.0)) break;
    const double next = arg - h * (fp - fm) / (2.0 * curvature);
    if (!(next >= lo && next <= hi)) break;
    arg = next;
    value = f(arg);
  }
  return {arg, value};
}

double reference_normal_cdf(double y) {
  detail::require_finite(y, "y");
  if (std::fabs(y) > 6.0) throw DomainError("reference_normal_cdf: |y| must be <= 6");
  const long double yy = y;
  const long double y2 = yy * yy;
  long double term = yy;
  long double sum = term;
  for (int n = 1; n < 500; ++n) {
    term *= y2 / (2 * n + 1);
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
  }
  const long double density = 0.398942280401432677939946059934L * std::exp(-0.5L * y2);
  return static_cast<double>(0.5L + density * sum);
}

int finite_difference_sign(const std::function<double(double)>& objective, double at, double step) {
  detail::require_finite(at, "at");
  detail::require_positive(step, "step");
  double slope = 0.0;
  if (at - step < 0.0) {
    slope = (objective(at + step) - objective(at)) / step;
  } else {
    slope = (objective(at + step) - objective(at - step)) / (2.0 * step);
  }
  if (std::fabs(slope) <= 1e-12) return 0;
  return slope > 0.0 ? 1 : -1;
}

}  // namespace fse::oracle
