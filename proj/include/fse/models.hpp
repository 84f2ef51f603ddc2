#pragma once

#include <functional>
#include <variant>

namespace fse {

/// A density on the real line, evaluated pointwise.
using Kernel = std::function<double(double)>;

/// f(x|theta) = phi((x - theta)/sigma)/sigma with known measurement error sigma.
struct NormalLocationModel {
  double sigma;

  explicit NormalLocationModel(double sigma);
};

/// f(x|theta) = k(x - theta), theta real. Suprema are searched for over
/// theta in [x - W, x + W] with W the search half-width.
class LocationFamily {
public:
  LocationFamily(Kernel kernel, double search_halfwidth);

  double kernel(double t) const;
  double search_halfwidth() const { return halfwidth_; }

private:
  Kernel kernel_;
  double halfwidth_;
};

/// f(x|theta) = k(x/theta)/theta, theta > 0. Suprema are searched for over
/// t = x/theta in [-W, W].
class ScaleFamily {
public:
  ScaleFamily(Kernel kernel, double search_halfwidth);

  double kernel(double t) const;
  double search_halfwidth() const { return halfwidth_; }

private:
  Kernel kernel_;
  double halfwidth_;
};

using EvidenceModel = std::variant<NormalLocationModel, LocationFamily, ScaleFamily>;

enum class Side { upper, lower };

/// One-sided supremum of theta -> f(x|theta). The upper side ranges over
/// theta >= theta0, the lower side over theta < theta0 (taken over its closure,
/// so a supremum approached at theta0 is reported there with at_boundary set).
struct Supremum {
  double value = 0.0;
  double log_value = 0.0;
  double arg = 0.0;
  bool at_boundary = false;
};

inline constexpr double kDefaultHalfwidthUnits = 12.0;

/// Location family with kernel phi(t/sigma)/sigma (same likelihood as NormalLocationModel,
/// but every supremum goes through the numeric search).
LocationFamily normal_location_kernel(double sigma);

/// Location family with kernel w*N(-d*sigma, sigma^2) + (1-w)*N(d*sigma, sigma^2).
LocationFamily normal_mixture_location(double sigma, double separation = 2.0, double weight = 0.5);

/// Scale family with k = phi.
ScaleFamily normal_scale();

double density_at(const EvidenceModel& model, double x, double theta);

Supremum sup_density(const EvidenceModel& model, double x, double theta0, Side side);

}  // namespace fse
