#pragma once

// Test-side reference implementations, kept independent of the library code
// they are used to check.

#include <cmath>
#include <stdexcept>

namespace oracles {

/// erf by Maclaurin series, |x| <= 2.5 (alternating series, ~1e-14 there).
inline double erf_series(double x) {
  const double x2 = x * x;
  double term = x;  // x^(2k+1) (-1)^k / (k! (2k+1)) carried incrementally
  double sum = x;
  for (int k = 1; k < 80; ++k) {
    term *= -x2 / static_cast<double>(k);
    const double contrib = term / static_cast<double>(2 * k + 1);
    sum += contrib;
    if (std::abs(contrib) < 1e-18 * std::abs(sum)) break;
  }
  return sum * 2.0 / std::sqrt(M_PI);
}

/// erfc by the Laplace continued fraction (modified Lentz), x >= 2.
inline double erfc_continued_fraction(double x) {
  // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
  const double tiny = 1e-300;
  double f = x, c = f, d = 0.0;
  for (int n = 1; n < 300; ++n) {
    const double a = 0.5 * n;
    d = x + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = x + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x * x) / (std::sqrt(M_PI) * f);
}

/// Reference erf over the full line: series in the center, continued
/// fraction in the tails.
inline double erf_reference(double x) {
  const double ax = std::abs(x);
  double v;
  if (ax <= 2.5)
    v = erf_series(ax);
  else
    v = 1.0 - erfc_continued_fraction(ax);
  return x < 0 ? -v : v;
}

/// Standard normal CDF from the reference erf/erfc.
inline double normal_cdf(double z) {
  const double u = -z / std::sqrt(2.0);
  if (u >= 2.0) return 0.5 * erfc_continued_fraction(u);
  if (u <= -2.0) return 1.0 - 0.5 * erfc_continued_fraction(-u);
  return 0.5 * (1.0 - erf_series(u));
}

/// Composite Simpson on a fixed grid; the dumb-but-sure quadrature used to
/// cross-check the adaptive one.
template <typename F>
double simpson(F f, double a, double b, int n /* even */) {
  if (n % 2) throw std::invalid_argument("simpson: n must be even");
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += f(a + h * i) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace oracles
