#pragma once

// Test-only reference computations, independent of the library's normal functions.

#include <cmath>
#include <functional>

namespace fse::testing {

inline long double ref_pdf(long double y) {
  return 0.398942280401432677939946059934L * std::exp(-0.5L * y * y);
}

// Composite Simpson in long double.
inline long double simpson(const std::function<long double(long double)>& f, long double a, long double b, int n) {
  const long double h = (b - a) / n;
  long double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0L : 2.0L) * f(a + h * i);
  return sum * h / 3.0L;
}

// Phi(-z) for z > 0 as phi(z) * int_0^inf exp(-z s - s^2/2) ds, the substitution t = z + s
// in the tail integral; the integrand is smooth and decays at rate z.
inline long double ref_upper_tail(long double z) {
  auto g = [z](long double s) { return std::exp(-z * s - 0.5L * s * s); };
  const long double span = 60.0L / z;
  return ref_pdf(z) * simpson(g, 0.0L, span, 200000);
}

}  // namespace fse::testing
