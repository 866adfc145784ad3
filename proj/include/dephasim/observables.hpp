#pragma once

#include <cstdint>

#include "dephasim/estimate.hpp"
#include "dephasim/profiles.hpp"
#include "dephasim/rng.hpp"
#include "dephasim/stochastic.hpp"

namespace dephasim {

/// Two equally weighted plane waves with momenta k1, k2 and mass m.
/// The dephasing-relevant scale is the energy gap Delta = (k1^2 - k2^2)/2m.
struct PlaneWavePair {
  PlaneWavePair(double k1, double k2, double mass);

  double k1, k2, mass;
  double energy_gap() const { return (k1 * k1 - k2 * k2) / (2.0 * mass); }
};

/// Initial Gaussian wave packet of spatial width sigma0 and mass m;
/// momentum distribution |phi(p)|^2 = sqrt(2 sigma0^2/pi) e^{-2 sigma0^2 p^2}.
struct GaussianPacket {
  GaussianPacket(double sigma0, double mass);

  double sigma0, mass;
  double momentum_sigma() const { return 0.5 / sigma0; }
};

/// Closed-system interference pattern 1 + cos[(k1-k2) x - Delta t].
double unitary_pattern(double x, double t, const PlaneWavePair& pair);

/// Open-system pattern: the fringe contrast is damped by
/// e^{-Delta^2 lambda(t)/2} while the phase is unchanged.
double damped_pattern(double x, double t, const PlaneWavePair& pair,
                      const DecoherenceProfile& profile);

/// Monte Carlo pattern: averages unitary_pattern(x, X_t) over random phase
/// times. Converges to damped_pattern at O(n_paths^{-1/2}); exactly zero
/// variance when Delta = 0 (decoherence-free) or sigma == 0.
ScalarEstimate mc_pattern(double x, double t, const PlaneWavePair& pair,
                          const DecoherenceProfile& profile, std::int64_t n_paths, SeedSpec seed,
                          const McOptions& options = {});

/// First-principles purity of the dephased Gaussian packet:
///   P(t) =int int |phi(p)|^2 |phi(q)|^2 e^{-lambda(t) (p^2-q^2)^2 / 4m^2} dp dq
/// by 2-D adaptive quadrature (rel tol 1e-6). The independent oracle for the
/// closed form below.
double purity_gaussian_oracle(double t, const GaussianPacket& packet,
                              const DecoherenceProfile& profile);
double purity_gaussian_oracle_at_lambda(double lambda_t, const GaussianPacket& packet);

/// 1 - purity_gaussian_oracle, clamped to [0, 1].
double linear_entropy_oracle(double t, const GaussianPacket& packet,
                             const DecoherenceProfile& profile);

/// Closed-form linear entropy of the packet,
///   S_lin(t) = 1 - kappa int_0^inf e^{-kappa y} e^{-y^2/2} I0(y^2/2) dy,
/// kappa = 4 m sigma0^2 / sqrt(lambda(t)), by 1-D adaptive quadrature with
/// the y -> 0 limit analytic (integrand -> kappa) and exponential tail
/// truncation. Returns 0 when lambda(t) = 0. See docs/linear_entropy.md.
double linear_entropy_closed_form(double t, const GaussianPacket& packet,
                                  const DecoherenceProfile& profile);
double linear_entropy_closed_form_at_lambda(double lambda_t, const GaussianPacket& packet);

/// Symmetric momentum grid [-p_max, p_max] with n_points samples.
struct MomentumGrid {
  double p_max;
  std::int64_t n_points;
};

/// Monte Carlo linear entropy: discretizes phi(p), evolves rho(p,q) per path
/// by the phases e^{-i p^2 X_t / 2m}, averages, and integrates the purity by
/// the trapezoid rule. mean is the unbiased (U-statistic) estimate; std_err
/// is a delete-one-block jackknife over the path chunks. The grid must cover
/// at least 6 momentum sigmas.
ScalarEstimate mc_gaussian_entropy(double t, const GaussianPacket& packet,
                                   const DecoherenceProfile& profile, const MomentumGrid& grid,
                                   std::int64_t n_paths, SeedSpec seed,
                                   const McOptions& options = {});

/// Self-test identity int_0^pi e^{-z cos^2 th} sin th dth = sqrt(pi/z) erf(sqrt z)
/// (equivalently 2 int_0^1 e^{-z s^2} ds). Returns both sides.
struct IdentityCheck {
  double quadrature;
  double closed_form;
};
IdentityCheck erf_integral_identity(double z);

}  // namespace dephasim
