#include "dephasim/observables.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "dephasim/numerics.hpp"
#include "dephasim/parallel.hpp"

namespace dephasim {

PlaneWavePair::PlaneWavePair(double k1, double k2, double mass) : k1(k1), k2(k2), mass(mass) {
  if (!(mass > 0)) throw std::domain_error("PlaneWavePair: mass must be positive");
  if (!std::isfinite(k1) || !std::isfinite(k2))
    throw std::domain_error("PlaneWavePair: momenta must be finite");
}

GaussianPacket::GaussianPacket(double sigma0, double mass) : sigma0(sigma0), mass(mass) {
  if (!(sigma0 > 0)) throw std::domain_error("GaussianPacket: sigma0 must be positive");
  if (!(mass > 0)) throw std::domain_error("GaussianPacket: mass must be positive");
}

double unitary_pattern(double x, double t, const PlaneWavePair& pair) {
  return 1.0 + std::cos((pair.k1 - pair.k2) * x - pair.energy_gap() * t);
}

double damped_pattern(double x, double t, const PlaneWavePair& pair,
                      const DecoherenceProfile& profile) {
  if (t < 0) throw std::domain_error("damped_pattern: t < 0");
  const double gap = pair.energy_gap();
  const double envelope = std::exp(-0.5 * gap * gap * lambda_of_t(profile, t));
  return 1.0 + envelope * std::cos((pair.k1 - pair.k2) * x - gap * t);
}

ScalarEstimate mc_pattern(double x, double t, const PlaneWavePair& pair,
                          const DecoherenceProfile& profile, std::int64_t n_paths, SeedSpec seed,
                          const McOptions& options) {
  if (n_paths < 2) throw std::domain_error("mc_pattern: n_paths must be >= 2");
  if (t < 0) throw std::domain_error("mc_pattern: t < 0");

  const double lambda_t = lambda_of_t(profile, t);
  const double phase_x = (pair.k1 - pair.k2) * x;
  const double gap = pair.energy_gap();

  struct Part {
    std::int64_t n = 0;
    double mean = 0.0, m2 = 0.0;
  };
  const std::size_t chunks = chunk_count(static_cast<std::size_t>(n_paths), kMcChunk);
  std::vector<Part> partials(chunks);

  for_each_chunk(static_cast<std::size_t>(n_paths), kMcChunk,
                 [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                   Part acc;
                   for (std::size_t a = begin; a < end; ++a) {
                     const double xt =
                         draw_phase_time(t, lambda_t, profile, seed.substream(a), options);
                     const double sample = 1.0 + std::cos(phase_x - gap * xt);
                     acc.n += 1;
                     const double delta = sample - acc.mean;
                     acc.mean += delta / static_cast<double>(acc.n);
                     acc.m2 += delta * (sample - acc.mean);
                   }
                   partials[chunk] = acc;
                 });

  Part total;
  for (const Part& p : partials) {
    if (p.n == 0) continue;
    if (total.n == 0) {
      total = p;
      continue;
    }
    const double na = static_cast<double>(total.n), nb = static_cast<double>(p.n);
    const double delta = p.mean - total.mean;
    total.mean += delta * (nb / (na + nb));
    total.m2 += p.m2 + delta * delta * (na * nb / (na + nb));
    total.n += p.n;
  }

  const double n = static_cast<double>(total.n);
  return {total.mean, std::sqrt(total.m2 / (n - 1.0) / n), total.n};
}

// ---------------------------------------------------------------------------
// Gaussian packet entropy.

namespace {

// |phi(p)|^2 for the packet.
double momentum_density(const GaussianPacket& packet, double p) {
  const double s2 = packet.sigma0 * packet.sigma0;
  return std::sqrt(2.0 * s2 / M_PI) * std::exp(-2.0 * s2 * p * p);
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

double purity_gaussian_oracle_at_lambda(double lambda_t, const GaussianPacket& packet) {
  if (lambda_t < 0) throw std::domain_error("purity_gaussian_oracle: lambda < 0");
  if (lambda_t == 0) return 1.0;

  const double inv_4m2 = 1.0 / (4.0 * packet.mass * packet.mass);
  auto integrand = [&](double p, double q) {
    const double gap2 = (p * p - q * q) * (p * p - q * q) * inv_4m2;
    return momentum_density(packet, p) * momentum_density(packet, q) *
           std::exp(-lambda_t * gap2);
  };

  // Integrand is even in p and q separately: 4x the first quadrant. At large
  // lambda the kernel collapses onto a narrow ridge along q = p; splitting
  // the inner range there keeps the ridge at an interval endpoint where the
  // adaptive rule resolves it.
  const double box = 8.0 * packet.momentum_sigma();
  const QuadratureSpec spec{.rel_tol = 1e-6, .abs_tol = 1e-14, .max_subdivisions = 20000};
  const QuadratureResult r = quad2d_adaptive(
      integrand, 0.0, box, 0.0, box, spec,
      [](double p) { return std::vector<double>{p}; });
  return 4.0 * r.value;
}

double purity_gaussian_oracle(double t, const GaussianPacket& packet,
                              const DecoherenceProfile& profile) {
  if (t < 0) throw std::domain_error("purity_gaussian_oracle: t < 0");
  return purity_gaussian_oracle_at_lambda(lambda_of_t(profile, t), packet);
}

double linear_entropy_oracle(double t, const GaussianPacket& packet,
                             const DecoherenceProfile& profile) {
  return clamp01(1.0 - purity_gaussian_oracle(t, packet, profile));
}

double linear_entropy_closed_form_at_lambda(double lambda_t, const GaussianPacket& packet) {
  if (lambda_t < 0) throw std::domain_error("linear_entropy_closed_form: lambda < 0");
  if (lambda_t == 0) return 0.0;

  const double kappa = 4.0 * packet.mass * packet.sigma0 * packet.sigma0 / std::sqrt(lambda_t);
  // Integrand e^{-kappa y} w(y), w(y) = e^{-y^2/2} I0(y^2/2): w(0) = 1 and
  // w(y) ~ 1/(y sqrt(pi)) for large y, so the tail is below 1e-16 of the
  // y->0 peak once kappa y > ~40.
  auto integrand = [kappa](double y) {
    return std::exp(-kappa * y) * bessel_i0_scaled(0.5 * y * y);
  };
  const double cutoff = 45.0 / kappa;
  const QuadratureSpec spec{.rel_tol = 1e-8, .abs_tol = 1e-15, .max_subdivisions = 20000};
  const QuadratureResult r = quad_to_infinity(integrand, 0.0, spec, cutoff);
  return clamp01(1.0 - kappa * r.value);
}

double linear_entropy_closed_form(double t, const GaussianPacket& packet,
                                  const DecoherenceProfile& profile) {
  if (t < 0) throw std::domain_error("linear_entropy_closed_form: t < 0");
  return linear_entropy_closed_form_at_lambda(lambda_of_t(profile, t), packet);
}

ScalarEstimate mc_gaussian_entropy(double t, const GaussianPacket& packet,
                                   const DecoherenceProfile& profile, const MomentumGrid& grid,
                                   std::int64_t n_paths, SeedSpec seed, const McOptions& options) {
  if (n_paths < 2) throw std::domain_error("mc_gaussian_entropy: n_paths must be >= 2");
  if (t < 0) throw std::domain_error("mc_gaussian_entropy: t < 0");
  if (grid.n_points < 8) throw ConfigError("mc_gaussian_entropy: grid too coarse");
  if (grid.p_max < 6.0 * packet.momentum_sigma())
    throw ConfigError("mc_gaussian_entropy: grid covers less than 6 momentum sigmas");

  const Eigen::Index d = static_cast<Eigen::Index>(grid.n_points);
  const double dp = 2.0 * grid.p_max / static_cast<double>(d - 1);

  // Trapezoid weights and the discretized |phi|^2.
  Eigen::VectorXd w = Eigen::VectorXd::Constant(d, dp);
  w[0] = w[d - 1] = 0.5 * dp;
  Eigen::VectorXd density(d);
  Eigen::VectorXd energy(d);  // E_p = p^2 / 2m
  for (Eigen::Index i = 0; i < d; ++i) {
    const double p = -grid.p_max + dp * static_cast<double>(i);
    density[i] = momentum_density(packet, p);
    energy[i] = p * p / (2.0 * packet.mass);
  }
  const Eigen::VectorXd v = w.cwiseProduct(density);  // v_i = w_i |phi_i|^2
  const double trace = v.sum();                        // ~1 up to grid error

  const double lambda_t = lambda_of_t(profile, t);

  // Jackknife block size depends only on n_paths, so results are
  // reproducible under any parallelism; blocks are also the GEMM batches.
  const std::size_t np = static_cast<std::size_t>(n_paths);
  const std::size_t block = std::clamp<std::size_t>(np / 32, 1, 256);
  const std::size_t n_blocks = chunk_count(np, block);

  // Per block: G_b = sum_a z^(a) z^(a)dagger via a GEMM over the block's
  // phase vectors z_i = e^{-i E_i X}; rho_bar then factorizes as
  // rho_bar_ij = phi_i conj(phi_j) G_ij / n.
  std::vector<Eigen::MatrixXcd> partials(n_blocks);
  for_each_chunk(np, block, [&](std::size_t b, std::size_t begin, std::size_t end) {
    const Eigen::Index rows = static_cast<Eigen::Index>(end - begin);
    Eigen::MatrixXcd z(rows, d);
    for (std::size_t a = begin; a < end; ++a) {
      const double xt = draw_phase_time(t, lambda_t, profile, seed.substream(a), options);
      const Eigen::Index row = static_cast<Eigen::Index>(a - begin);
      for (Eigen::Index i = 0; i < d; ++i)
        z(row, i) = std::complex<double>(std::cos(energy[i] * xt), -std::sin(energy[i] * xt));
    }
    partials[b] = (z.adjoint() * z).conjugate();  // sum_a z z^dagger
  });

  Eigen::MatrixXcd g_total = Eigen::MatrixXcd::Zero(d, d);
  for (const Eigen::MatrixXcd& part : partials) g_total += part;

  const Eigen::MatrixXd vv = v * v.transpose();
  auto plug_purity = [&](const Eigen::MatrixXcd& g, double n) {
    return vv.array().cwiseProduct((g.array() / n).abs2()).sum();
  };
  // U-statistic correction: every per-path state is pure with discretized
  // purity trace^2, so E[plug] = P + (trace^2 - P)/n exactly.
  auto unbiased = [&](const Eigen::MatrixXcd& g, double n) {
    if (n < 2) return plug_purity(g, n);
    return (n * plug_purity(g, n) - trace * trace) / (n - 1.0);
  };

  const double n = static_cast<double>(n_paths);
  const double p_hat = unbiased(g_total, n);

  // Delete-one-block jackknife.
  double std_err = 0.0;
  if (n_blocks >= 2) {
    std::vector<double> loo(n_blocks);
    double loo_mean = 0.0;
    for (std::size_t c = 0; c < n_blocks; ++c) {
      const double block_n =
          static_cast<double>(std::min(np, (c + 1) * block) - c * block);
      loo[c] = unbiased(g_total - partials[c], n - block_n);
      loo_mean += loo[c];
    }
    loo_mean /= static_cast<double>(n_blocks);
    double ss = 0.0;
    for (double l : loo) ss += (l - loo_mean) * (l - loo_mean);
    const double nb = static_cast<double>(n_blocks);
    std_err = std::sqrt((nb - 1.0) / nb * ss);
  }

  return {clamp01(1.0 - p_hat), std_err, n_paths};
}

IdentityCheck erf_integral_identity(double z) {
  if (!(z > 0)) throw std::domain_error("erf_integral_identity: z must be positive");
  const QuadratureResult lhs = quad_adaptive(
      [z](double th) { return std::exp(-z * std::cos(th) * std::cos(th)) * std::sin(th); }, 0.0,
      M_PI, {.rel_tol = 1e-12, .abs_tol = 1e-14, .max_subdivisions = 10000});
  const double rhs = std::sqrt(M_PI / z) * erf(std::sqrt(z));
  return {lhs.value, rhs};
}

}  // namespace dephasim
