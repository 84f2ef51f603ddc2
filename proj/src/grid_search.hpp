#pragma once

#include <cmath>
#include <cstddef>
#include <utility>

namespace fse::detail {

struct GridMax {
  double arg = 0.0;
  double value = 0.0;
};

inline constexpr double kInvGolden = 0.618033988749894848204586834366;

// Golden-section maximization of f on [lo, hi] (lo < hi) down to an argument width of tol.
template <class F>
double golden_maximize(F&& f, double lo, double hi, double tol) {
  double c = hi - kInvGolden * (hi - lo);
  double d = lo + kInvGolden * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvGolden * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvGolden * (hi - lo);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

// Maximize f over the segment from `from` to `to` (either order): an n-point uniform grid,
// then golden-section refinement inside the bracket around the best grid point.
// Ties resolve toward `from`. The returned point is never worse than the best grid point.
template <class F>
GridMax grid_golden_maximize(F&& f, double from, double to, std::size_t n, double tol) {
  if (from == to || n < 3) {
    return {from, f(from)};
  }
  const double step = (to - from) / static_cast<double>(n - 1);
  auto node = [&](std::size_t i) { return i + 1 == n ? to : from + step * static_cast<double>(i); };

  std::size_t best = 0;
  double best_value = f(from);
  for (std::size_t i = 1; i < n; ++i) {
    const double v = f(node(i));
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }

  GridMax out{node(best), best_value};
  const double a = node(best == 0 ? 0 : best - 1);
  const double b = node(best + 1 == n ? best : best + 1);
  const double lo = std::fmin(a, b);
  const double hi = std::fmax(a, b);
  if (hi > lo) {
    const double refined = golden_maximize(f, lo, hi, tol);
    const double refined_value = f(refined);
    if (refined_value > out.value) {
      out = {refined, refined_value};
    }
  }
  return out;
}

}  // namespace fse::detail
