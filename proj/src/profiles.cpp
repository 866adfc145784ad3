#include "dephasim/profiles.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "dephasim/expression.hpp"

namespace dephasim {

double lambda_of_t(const DecoherenceProfile& profile, double t) {
  if (t < 0) throw std::domain_error("lambda_of_t: t < 0");
  if (t == 0) return 0.0;
  if (profile.has_closed_lambda()) return profile.lambda(t);
  const auto& sigma = profile.sigma;
  const QuadratureResult r =
      quad_adaptive([&sigma](double s) { return sigma(s) * sigma(s); }, 0.0, t,
                    {.rel_tol = 1e-8, .abs_tol = 1e-14, .max_subdivisions = 10000});
  return r.value;
}

DecoherenceProfile markovian_profile(double sigma0) {
  const double s2 = sigma0 * sigma0;
  char label[64];
  std::snprintf(label, sizeof(label), "markovian(sigma0=%g)", sigma0);
  return {[sigma0](double) { return sigma0; }, [s2](double t) { return s2 * t; }, label};
}

DecoherenceProfile submarkovian_profile(double sigma0, double gamma) {
  const double s2 = sigma0 * sigma0;
  char label[64];
  std::snprintf(label, sizeof(label), "submarkovian(sigma0=%g,gamma=%g)", sigma0, gamma);
  return {[sigma0, gamma](double t) { return sigma0 * std::exp(-gamma * t); },
          [s2, gamma](double t) { return s2 * (1.0 - std::exp(-2.0 * gamma * t)) / (2.0 * gamma); },
          label};
}

DecoherenceProfile super1_profile(double sigma0) {
  // (1+t)^{-1/4} rather than t^{-1/4}: same asymptotics, regular at t = 0.
  const double s2 = sigma0 * sigma0;
  char label[64];
  std::snprintf(label, sizeof(label), "super1(sigma0=%g)", sigma0);
  return {[sigma0](double t) { return sigma0 * std::pow(1.0 + t, -0.25); },
          [s2](double t) { return 2.0 * s2 * (std::sqrt(1.0 + t) - 1.0); }, label};
}

DecoherenceProfile super2_profile(double sigma0) {
  const double s2 = sigma0 * sigma0;
  char label[64];
  std::snprintf(label, sizeof(label), "super2(sigma0=%g)", sigma0);
  return {[sigma0](double t) { return sigma0 * std::sqrt(t); },
          [s2](double t) { return 0.5 * s2 * t * t; }, label};
}

std::vector<DecoherenceProfile> builtin_profiles() {
  return {markovian_profile(), submarkovian_profile(), super1_profile(), super2_profile()};
}

DecoherenceProfile profile_from_expression(const std::string& sigma_expr) {
  return {parse_expression(sigma_expr), nullptr, "sigma(t)=" + sigma_expr};
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Markovian:
      return "Markovian";
    case Regime::SubMarkovian:
      return "SubMarkovian";
    case Regime::SuperMarkovianI:
      return "SuperMarkovianI";
    case Regime::SuperMarkovianII:
      return "SuperMarkovianII";
  }
  return "?";
}

RegimeClass classify_regime(const DecoherenceProfile& profile, double horizon, double window,
                            const ClassifyThresholds& thresholds) {
  if (!(horizon > 0)) throw std::domain_error("classify_regime: horizon must be positive");
  if (!(window > 0) || !(window < 1))
    throw std::domain_error("classify_regime: window must lie in (0, 1)");
  if (thresholds.n_samples < 3) throw std::domain_error("classify_regime: need >= 3 samples");

  const double t_lo = horizon * (1.0 - window);
  const double log_lo = std::log(t_lo), log_hi = std::log(horizon);
  const int n = thresholds.n_samples;

  std::vector<double> ts(n), ls(n);
  bool any_positive = false;
  for (int i = 0; i < n; ++i) {
    ts[i] = std::exp(log_lo + (log_hi - log_lo) * i / (n - 1));
    ls[i] = lambda_of_t(profile, ts[i]);
    if (ls[i] > 0) any_positive = true;
  }
  if (!any_positive)
    throw NumericalError("classify_regime: no decoherence (lambda == 0 on the fit window)");
  for (int i = 0; i < n; ++i)
    if (!(ls[i] > 0))
      throw NumericalError("classify_regime: lambda vanishes at t=" + std::to_string(ts[i]));

  const double p = tail_slope(ts, ls);

  double rms = 0.0;
  {
    // Fit residual, for the confidence note.
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) {
      mx += std::log(ts[i]);
      my += std::log(ls[i]);
    }
    mx /= n;
    my /= n;
    for (int i = 0; i < n; ++i) {
      const double r = (std::log(ls[i]) - my) - p * (std::log(ts[i]) - mx);
      rms += r * r;
    }
    rms = std::sqrt(rms / n);
  }

  Regime regime;
  if (p < thresholds.sub_below)
    regime = Regime::SubMarkovian;
  else if (p < thresholds.markov_low)
    regime = Regime::SuperMarkovianI;
  else if (p <= thresholds.markov_high)
    regime = Regime::Markovian;
  else
    regime = Regime::SuperMarkovianII;

  char note[128];
  std::snprintf(note, sizeof(note), "log-log fit over [%.6g, %.6g], %d points, rms residual %.2e",
                t_lo, horizon, n, rms);
  return {regime, p, note};
}

}  // namespace dephasim
