#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dephasim/numerics.hpp"

namespace dephasim {

/// An environment, described by the noise amplitude sigma(t) and the
/// accumulated decoherence function lambda(t) = integral of sigma^2 over
/// [0, t]. Built-ins carry lambda in closed form; profiles constructed from
/// a bare sigma fall back to adaptive quadrature. Immutable once built.
struct DecoherenceProfile {
  std::function<double(double)> sigma;
  std::function<double(double)> lambda;  // empty => quadrature on demand
  std::string label;

  bool has_closed_lambda() const { return static_cast<bool>(lambda); }
};

/// lambda(t) for any profile: closed form when the profile carries one,
/// otherwise adaptive quadrature of sigma^2 on [0, t] at rel_tol 1e-8.
double lambda_of_t(const DecoherenceProfile& profile, double t);

// The four environment archetypes. Parameters are free; defaults give
// lambda(1) on the order of 1.
DecoherenceProfile markovian_profile(double sigma0 = 1.0);
DecoherenceProfile submarkovian_profile(double sigma0 = 1.0, double gamma = 1.0);
/// sigma(t) = sigma0 (1+t)^{-1/4}: lambda unbounded but sublinear (~ 2 sigma0^2 sqrt(t)).
DecoherenceProfile super1_profile(double sigma0 = 1.0);
/// sigma(t) = sigma0 sqrt(t): lambda = sigma0^2 t^2 / 2, superlinear.
DecoherenceProfile super2_profile(double sigma0 = 1.0);

std::vector<DecoherenceProfile> builtin_profiles();

/// Profile from a sigma(t) expression string (see expression.hpp grammar);
/// lambda is computed by quadrature.
DecoherenceProfile profile_from_expression(const std::string& sigma_expr);

enum class Regime { Markovian, SubMarkovian, SuperMarkovianI, SuperMarkovianII };

const char* regime_name(Regime r);

struct RegimeClass {
  Regime regime;
  double fitted_exponent;
  std::string confidence_note;
};

struct ClassifyThresholds {
  double sub_below = 0.1;        // p <  0.1            -> SubMarkovian
  double markov_low = 0.9;       // 0.1 <= p < 0.9      -> SuperMarkovian I
  double markov_high = 1.1;      // 0.9 <= p <= 1.1     -> Markovian
  int n_samples = 33;            // log-spaced tail samples; p > 1.1 -> II
};

/// Fits the tail slope p of log lambda vs log t over
/// [horizon*(1-window), horizon] and maps it to a regime.
/// Throws NumericalError("no decoherence") when lambda vanishes on the window.
RegimeClass classify_regime(const DecoherenceProfile& profile, double horizon = 1e3,
                            double window = 0.5, const ClassifyThresholds& thresholds = {});

}  // namespace dephasim
