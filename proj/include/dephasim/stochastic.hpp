#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <utility>

#include "dephasim/profiles.hpp"
#include "dephasim/rng.hpp"
#include "dephasim/time_grid.hpp"

namespace dephasim {

/// One realization of standard Brownian motion, stored as its increments:
/// increments[k] ~ N(0, h) is B(t_{k+1}) - B(t_k); B(0) = 0.
struct BrownianPath {
  TimeGrid grid;
  Eigen::VectorXd increments;

  double value_at_end() const { return increments.sum(); }
};

/// Increments drawn i.i.d. N(0, h) from the stream named by seed.
BrownianPath sample_brownian_path(const TimeGrid& grid, SeedSpec seed);

/// Ito integral of a deterministic integrand against the path:
/// left-endpoint Riemann sum  sum_k sigma(t_k) * dB_k.
double ito_integral(const std::function<double(double)>& sigma, const BrownianPath& path);

/// A draw of the random phase time X_t = t + int_0^t sigma dB.
struct PhaseTimeSample {
  double t;
  double x;
};

/// Pathwise sampler: fresh Brownian path on [0, t] with n_steps steps.
PhaseTimeSample sample_phase_time(double t, const DecoherenceProfile& profile, SeedSpec seed,
                                  std::int64_t n_steps);

/// Direct sampler: X_t = t + sqrt(lambda(t)) * Z. Statistically identical to
/// the pathwise sampler (the Ito integral of a deterministic integrand is
/// Gaussian with variance lambda) and much cheaper.
PhaseTimeSample sample_phase_time_direct(double t, const DecoherenceProfile& profile,
                                         SeedSpec seed);

enum class PhaseSampler { DirectGaussian, PathwiseIto };

struct McOptions {
  PhaseSampler sampler = PhaseSampler::DirectGaussian;
  std::int64_t steps_per_unit_time = 1000;
};

/// Dispatches on options.sampler; lambda_t = lambda(t), precomputed by the
/// caller so per-path work stays O(1) for the direct sampler.
double draw_phase_time(double t, double lambda_t, const DecoherenceProfile& profile, SeedSpec seed,
                       const McOptions& options);

/// Central moments of X_t, i.e. moments of the zero-mean part int sigma dB:
/// beta_{2n} = (2n)!/(2^n n!) * lambda^n and beta_{2n+1} = 0;
/// beta_0 = 1, beta_1 = 0.
double moment_closed_form(int n, double lambda_t);

/// Table of beta_n(t) on a grid, for n = 0..n_max.
struct MomentTable {
  TimeGrid grid;
  Eigen::MatrixXd values;  // (n_steps + 1) rows, (n_max + 1) columns

  double at(std::int64_t step, int n) const { return values(step, n); }
};

/// Integrates the moment ODE hierarchy d beta_n / dt = n(n-1)/2 sigma^2(t)
/// beta_{n-2} (base data beta_0 = 1, beta_1 = 0) by fixed-step RK4 on the
/// grid. Agrees with moment_closed_form to the integrator tolerance.
MomentTable moment_recursion(int n_max, const std::function<double(double)>& sigma,
                             const TimeGrid& grid);

/// (E[cos(a X_t)], E[sin(a X_t)]) = e^{-a^2 lambda(t)/2} (cos at, sin at).
std::pair<double, double> expect_trig(double a, double t, const DecoherenceProfile& profile);

}  // namespace dephasim
