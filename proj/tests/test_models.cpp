#include <doctest.h>

#include <cmath>
#include <random>

#include "fse/errors.hpp"
#include "fse/models.hpp"
#include "fse/normal.hpp"

using namespace fse;

namespace {
const double kPhi0 = 0.3989422804014327;
double phi(double t) { return kPhi0 * std::exp(-0.5 * t * t); }
}  // namespace

TEST_CASE("density_at follows each family definition") {
  CHECK(density_at(NormalLocationModel(0.1), 1.0, 1.0) == doctest::Approx(kPhi0 / 0.1).epsilon(1e-15));
  CHECK(density_at(normal_scale(), 1.0, 1.0) == doctest::Approx(0.24197072451914337).epsilon(1e-15));
  const LocationFamily loc([](double t) { return phi(t); }, 12.0);
  CHECK(density_at(loc, 2.0, 0.5) == doctest::Approx(phi(1.5)).epsilon(1e-15));
  CHECK_THROWS_AS(density_at(normal_scale(), 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(density_at(normal_scale(), 1.0, -2.0), DomainError);
}

TEST_CASE("model construction is validated") {
  CHECK_THROWS_AS(NormalLocationModel(0.0), DomainError);
  CHECK_THROWS_AS(NormalLocationModel(-1.0), DomainError);
  CHECK_THROWS_AS(LocationFamily([](double t) { return phi(t); }, 0.0), DomainError);
  CHECK_THROWS_AS(ScaleFamily([](double t) { return phi(t); }, -3.0), DomainError);
  // Not a density on the window.
  CHECK_THROWS_AS(LocationFamily([](double t) { return 2.0 * phi(t); }, 12.0), ModelError);
  // Nonpositive somewhere.
  CHECK_THROWS_AS(LocationFamily([](double t) { return t > 3.0 ? 0.0 : phi(t) * 1.00135; }, 12.0), ModelError);
}

TEST_CASE("normal location closed-form suprema") {
  const EvidenceModel m = NormalLocationModel(0.1);
  const Supremum up = sup_density(m, 1.2, 1.0, Side::upper);
  CHECK(up.arg == 1.2);
  CHECK_FALSE(up.at_boundary);
  CHECK(up.value == doctest::Approx(kPhi0 / 0.1).epsilon(1e-15));

  const Supremum lo = sup_density(m, 1.2, 1.0, Side::lower);
  CHECK(lo.at_boundary);
  CHECK(lo.arg == 1.0);
  CHECK(lo.value == doctest::Approx(phi(2.0) / 0.1).epsilon(1e-12));
  CHECK(lo.log_value == doctest::Approx(std::log(phi(2.0) / 0.1)).epsilon(1e-14));
}

TEST_CASE("generic location search matches the normal closed form") {
  const double theta0 = 1.0;
  const double sigma = 0.1;
  const EvidenceModel closed = NormalLocationModel(sigma);
  const EvidenceModel generic = normal_location_kernel(sigma);
  for (int i = 0; i < 200; ++i) {
    const double x = theta0 - 10.0 * sigma + 20.0 * sigma * i / 199.0;
    for (Side side : {Side::upper, Side::lower}) {
      const double a = sup_density(closed, x, theta0, side).value;
      const double b = sup_density(generic, x, theta0, side).value;
      CHECK(std::fabs(a - b) / a <= 1e-6);
    }
  }
}

TEST_CASE("scale family supremum sits at t = x/theta0 below the mode of t phi(t)") {
  const EvidenceModel m = normal_scale();
  const Supremum up = sup_density(m, 0.5, 1.0, Side::upper);

  // Grid oracle over t in (0, 0.5] of t phi(t) / x.
  double best = 0.0;
  for (int i = 1; i <= 100000; ++i) {
    const double t = 0.5 * i / 100000.0;
    best = std::fmax(best, t * phi(t) / 0.5);
  }
  CHECK(up.value == doctest::Approx(best).epsilon(1e-12));
  CHECK(up.value == doctest::Approx(phi(0.5)).epsilon(1e-12));
  CHECK(up.at_boundary);
  CHECK(up.arg == 1.0);

  // Lower side theta < 1 means t > 0.5: the peak of t phi(t) at t = 1, theta = 0.5.
  const Supremum lo = sup_density(m, 0.5, 1.0, Side::lower);
  CHECK(lo.value == doctest::Approx(phi(1.0) / 0.5).epsilon(1e-10));
  CHECK(lo.arg == doctest::Approx(0.5).epsilon(1e-5));

  // Negative x mirrors positive x.
  CHECK(sup_density(m, -0.5, 1.0, Side::upper).value == doctest::Approx(up.value).epsilon(1e-12));
  CHECK(sup_density(m, -0.5, 1.0, Side::lower).value == doctest::Approx(lo.value).epsilon(1e-10));

  CHECK_THROWS_AS(sup_density(m, 0.0, 1.0, Side::upper), DomainError);
  CHECK_THROWS_AS(sup_density(m, 0.5, -1.0, Side::upper), DomainError);
}

TEST_CASE("location-family suprema are monotone in x") {
  const EvidenceModel m = normal_mixture_location(0.1);
  double prev_up = 0.0;
  double prev_lo = 1e300;
  for (int i = 0; i <= 300; ++i) {
    const double x = 0.2 + 1.6 * i / 300.0;
    const double up = sup_density(m, x, 1.0, Side::upper).value;
    const double lo = sup_density(m, x, 1.0, Side::lower).value;
    CHECK(up >= prev_up * (1.0 - 1e-12));
    CHECK(lo <= prev_lo * (1.0 + 1e-12));
    prev_up = up;
    prev_lo = lo;
  }
}

TEST_CASE("supremum dominates the density at sampled parameters on its side") {
  std::mt19937_64 rng(7);
  const double theta0 = 1.0;
  const EvidenceModel models[] = {NormalLocationModel(0.1), normal_mixture_location(0.1), normal_scale()};
  for (const EvidenceModel& m : models) {
    const bool scale = std::holds_alternative<ScaleFamily>(m);
    for (double x : {0.4, 0.95, 1.3, 2.5}) {
      const double up = sup_density(m, x, theta0, Side::upper).value;
      const double lo = sup_density(m, x, theta0, Side::lower).value;
      std::uniform_real_distribution<double> above(theta0, theta0 + 3.0);
      std::uniform_real_distribution<double> below(scale ? 1e-3 : theta0 - 3.0, theta0);
      for (int k = 0; k < 100; ++k) {
        CHECK(up >= density_at(m, x, above(rng)) * (1.0 - 1e-12));
        CHECK(lo >= density_at(m, x, below(rng)) * (1.0 - 1e-12));
      }
    }
  }
}

TEST_CASE("ties between equal modes resolve to the smallest theta") {
  // Symmetric bimodal kernel: both modes lie in theta >= theta0 for x far above.
  const EvidenceModel m = normal_mixture_location(0.1, 2.0, 0.5);
  const Supremum up = sup_density(m, 3.0, 1.0, Side::upper);
  CHECK(up.arg < 3.0);
}
