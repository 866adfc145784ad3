#include "dephasim/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace dephasim {

namespace {

// 15-point Kronrod nodes (positive half), 7-point Gauss embedded.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
  double k15;
  double err;
};

// One G7/K15 panel with the QUADPACK-style error estimate.
PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  double fv[15];
  fv[7] = f(center);
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(center - half * kXgk[i]);
    fv[14 - i] = f(center + half * kXgk[i]);
  }

  double k15 = kWgk[7] * fv[7];
  double g7 = kWg[3] * fv[7];
  double resabs = kWgk[7] * std::abs(fv[7]);
  for (int i = 0; i < 7; ++i) {
    const double sum = fv[i] + fv[14 - i];
    k15 += kWgk[i] * sum;
    resabs += kWgk[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
    if (i % 2 == 1) g7 += kWg[i / 2] * sum;
  }
  const double mean = 0.5 * k15;
  double resasc = kWgk[7] * std::abs(fv[7] - mean);
  for (int i = 0; i < 7; ++i)
    resasc += kWgk[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));

  k15 *= half;
  g7 *= half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);

  double err = std::abs(k15 - g7);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double round_floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
  err = std::max(err, round_floor);
  return {k15, err};
}

struct Interval {
  double a, b, value, err;
};

}  // namespace

QuadratureResult quad_adaptive(const std::function<double(double)>& f, double a, double b,
                               const QuadratureSpec& spec) {
  if (!(spec.rel_tol > 0) || !(spec.abs_tol > 0) || spec.max_subdivisions < 1)
    throw std::domain_error("quad_adaptive: invalid QuadratureSpec");
  if (a == b) return {0.0, 0.0, 0};

  std::vector<Interval> heap;
  const PanelResult first = gk15(f, a, b);
  heap.push_back({a, b, first.k15, first.err});
  double total = first.k15;
  double err = first.err;

  auto worse = [](const Interval& l, const Interval& r) { return l.err < r.err; };
  int splits = 0;
  while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (splits >= spec.max_subdivisions) {
      char msg[160];
      std::snprintf(msg, sizeof(msg),
                    "quad_adaptive: %d subdivisions exhausted, estimate %.17g +- %.3g", splits,
                    total, err);
      throw NumericalError(msg, total, err);
    }

    std::pop_heap(heap.begin(), heap.end(), worse);
    const Interval top = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (top.a + top.b);
    if (mid <= top.a || mid >= top.b)
      throw NumericalError("quad_adaptive: interval at floating-point resolution", total, err);
    const PanelResult left = gk15(f, top.a, mid);
    const PanelResult right = gk15(f, mid, top.b);
    total += left.k15 + right.k15 - top.value;
    err += left.err + right.err - top.err;
    heap.push_back({top.a, mid, left.k15, left.err});
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back({mid, top.b, right.k15, right.err});
    std::push_heap(heap.begin(), heap.end(), worse);
    ++splits;
  }
  return {total, err, splits};
}

QuadratureResult quad_to_infinity(const std::function<double(double)>& f, double a,
                                  const QuadratureSpec& spec, double cutoff) {
  if (cutoff > a) return quad_adaptive(f, a, cutoff, spec);

  // Probe geometrically for a point past the peak where the integrand has
  // decayed to the round-off floor. The caller guarantees exponential decay.
  double peak = 0.0, x_peak = a;
  double x = a;
  double step = 1.0;
  for (int probes = 0; probes < 200; ++probes) {
    const double fx = std::abs(f(x));
    if (fx > peak) {
      peak = fx;
      x_peak = x;
    } else if (peak > 0.0 && fx <= 1e-16 * peak && x > x_peak + 1.0) {
      // Confirm with one more probe before truncating.
      if (std::abs(f(x + step)) <= 1e-16 * peak) return quad_adaptive(f, a, x + step, spec);
    }
    x += step;
    step *= 1.5;
  }
  if (peak == 0.0) return {0.0, 0.0, 0};
  throw NumericalError("quad_to_infinity: integrand does not decay on [a, inf)");
}

QuadratureResult quad2d_adaptive(const std::function<double(double, double)>& f, double ax,
                                 double bx, double ay, double by, const QuadratureSpec& spec,
                                 const std::function<std::vector<double>(double)>& inner_splits) {
  QuadratureSpec inner_spec = spec;
  inner_spec.rel_tol = spec.rel_tol * 0.1;
  inner_spec.abs_tol = spec.abs_tol * 0.1;

  double worst_inner = 0.0;
  auto inner = [&](double xv) {
    std::vector<double> cuts;
    if (inner_splits) {
      for (double c : inner_splits(xv))
        if (c > ay && c < by) cuts.push_back(c);
      std::sort(cuts.begin(), cuts.end());
    }
    cuts.insert(cuts.begin(), ay);
    cuts.push_back(by);
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      const QuadratureResult r = quad_adaptive([&](double yv) { return f(xv, yv); }, cuts[s],
                                               cuts[s + 1], inner_spec);
      total += r.value;
      worst_inner = std::max(worst_inner, r.error_estimate);
    }
    return total;
  };

  QuadratureResult outer = quad_adaptive(inner, ax, bx, spec);
  outer.error_estimate += worst_inner * std::abs(bx - ax);
  return outer;
}

// ---------------------------------------------------------------------------
// erf/erfc: Cody's rational approximations (netlib specfun CALERF constants).

namespace {

constexpr double kErfA[5] = {3.1611237438705656, 113.864154151050156, 377.485237685302021,
                             3209.37758913846947, 0.185777706184603153};
constexpr double kErfB[4] = {23.6012909523441209, 244.024637934444173, 1282.61652607737228,
                             2844.23683343917062};
constexpr double kErfC[9] = {0.564188496988670089, 8.88314979438837594, 66.1191906371416295,
                             298.635138197400131,  881.95222124176909,  1712.04761263407058,
                             2051.07837782607147,  1230.33935479799725, 2.15311535474403846e-8};
constexpr double kErfD[8] = {15.7449261107098347, 117.693950891312499, 537.181101862009858,
                             1621.38957456669019, 3290.79923573345963, 4362.61909014324716,
                             3439.36767414372164, 1230.33935480374942};
constexpr double kErfP[6] = {0.305326634961232344, 0.360344899949804439,  0.125781726111229246,
                             0.0160837851487422766, 6.58749161529837803e-4, 0.0163153871373020978};
constexpr double kErfQ[5] = {2.56852019228982242, 1.87295284992346047, 0.527905102951428412,
                             0.0605183413124413191, 0.00233520497626869185};
constexpr double kInvSqrtPi = 0.56418958354775628695;

// erfc(y) for 0.46875 < y, split into the two Cody branches.
double erfc_positive(double y) {
  double result;
  if (y <= 4.0) {
    double num = kErfC[8] * y;
    double den = y;
    for (int i = 0; i < 7; ++i) {
      num = (num + kErfC[i]) * y;
      den = (den + kErfD[i]) * y;
    }
    result = (num + kErfC[7]) / (den + kErfD[7]);
  } else {
    if (y >= 26.6) return 0.0;
    const double ysq = 1.0 / (y * y);
    double num = kErfP[5] * ysq;
    double den = ysq;
    for (int i = 0; i < 4; ++i) {
      num = (num + kErfP[i]) * ysq;
      den = (den + kErfQ[i]) * ysq;
    }
    result = ysq * (num + kErfP[4]) / (den + kErfQ[4]);
    result = (kInvSqrtPi - result) / y;
  }
  // exp(-y^2) split to keep the argument exactly representable.
  const double ytrunc = std::trunc(y * 16.0) / 16.0;
  const double del = (y - ytrunc) * (y + ytrunc);
  return std::exp(-ytrunc * ytrunc) * std::exp(-del) * result;
}

}  // namespace

double erf(double x) {
  const double y = std::abs(x);
  if (y <= 0.46875) {
    const double ysq = y > 1.11e-16 ? y * y : 0.0;
    double num = kErfA[4] * ysq;
    double den = ysq;
    for (int i = 0; i < 3; ++i) {
      num = (num + kErfA[i]) * ysq;
      den = (den + kErfB[i]) * ysq;
    }
    return x * (num + kErfA[3]) / (den + kErfB[3]);
  }
  const double result = 1.0 - erfc_positive(y);
  return x < 0 ? -result : result;
}

double erfc(double x) {
  if (x < -0.46875) return 2.0 - erfc(-x);
  if (x <= 0.46875) return 1.0 - erf(x);
  return erfc_positive(x);
}

double bessel_i0_scaled(double x) {
  if (x < 0) throw std::domain_error("bessel_i0_scaled: negative argument");
  if (x < 20.0) {
    // I0(x) = sum_k (x^2/4)^k / (k!)^2, all terms positive.
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    return sum * std::exp(-x);
  }
  // Asymptotic: e^{-x} I0(x) ~ (1/sqrt(2 pi x)) * sum_k prod_{j<k}(2j+1)^2 / (k! (8x)^k).
  const double inv8x = 1.0 / (8.0 * x);
  double term = 1.0, sum = 1.0;
  for (int k = 0; k < 40; ++k) {
    const double next = term * (2 * k + 1) * (2 * k + 1) * inv8x / (k + 1);
    if (next >= term || next < 1e-18 * sum) break;
    term = next;
    sum += term;
  }
  return sum / std::sqrt(2.0 * M_PI * x);
}

double tail_slope(const std::vector<double>& t, const std::vector<double>& lambda) {
  if (t.size() != lambda.size()) throw std::domain_error("tail_slope: size mismatch");
  if (t.size() < 3) throw std::domain_error("tail_slope: need at least 3 points");
  const std::size_t n = t.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(t[i] > 0)) throw std::domain_error("tail_slope: nonpositive t");
    if (i > 0 && !(t[i] > t[i - 1])) throw std::domain_error("tail_slope: t not increasing");
    if (!(lambda[i] > 0)) throw std::domain_error("tail_slope: nonpositive lambda");
    lx[i] = std::log(t[i]);
    ly[i] = std::log(lambda[i]);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace dephasim
