#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "dephasim/errors.hpp"

namespace dephasim {

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 10000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
};

/// Adaptive Gauss-Kronrod (G7,K15) on [a, b]. Throws NumericalError with the
/// best estimate attached if the subdivision budget runs out before the
/// requested tolerance max(abs_tol, rel_tol*|I|) is met.
QuadratureResult quad_adaptive(const std::function<double(double)>& f, double a, double b,
                               const QuadratureSpec& spec = {});

/// Integral over [a, +inf) of an exponentially decaying integrand. The range
/// is truncated at `cutoff` when given, otherwise at an automatically
/// detected point where |f| has fallen below 1e-16 of its observed peak.
QuadratureResult quad_to_infinity(const std::function<double(double)>& f, double a,
                                  const QuadratureSpec& spec = {}, double cutoff = 0.0);

/// Iterated adaptive quadrature of f(x, y) over [ax,bx] x [ay,by].
/// `inner_splits(x)`, when given, returns interior breakpoints for the inner
/// integral at abscissa x (used to pin narrow ridges to interval endpoints).
QuadratureResult quad2d_adaptive(
    const std::function<double(double, double)>& f, double ax, double bx, double ay, double by,
    const QuadratureSpec& spec = {.rel_tol = 1e-6, .abs_tol = 1e-12, .max_subdivisions = 10000},
    const std::function<std::vector<double>(double)>& inner_splits = nullptr);

/// Error function, in-house rational approximation (Cody, Math. Comp. 1969),
/// |rel err| < ~1e-15 over the full range.
double erf(double x);
double erfc(double x);

/// exp(-x) * I0(x) for x >= 0 (power series below x=20, asymptotic above).
double bessel_i0_scaled(double x);

/// Least-squares slope of log(lambda) against log(t).
/// Requires >= 3 points, strictly increasing t > 0, lambda > 0.
double tail_slope(const std::vector<double>& t, const std::vector<double>& lambda);

}  // namespace dephasim
