#include "dephasim/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dephasim/parallel.hpp"

namespace dephasim {

Hamiltonian::Hamiltonian(Eigen::VectorXd e) : energies(std::move(e)) {
  if (energies.size() < 1) throw std::domain_error("Hamiltonian: dimension must be >= 1");
  if (!energies.allFinite()) throw std::domain_error("Hamiltonian: energies must be finite");
}

void validate_density_matrix(const Eigen::MatrixXcd& rho, const DensityMatrixTolerances& tol) {
  if (rho.rows() != rho.cols()) throw std::domain_error("density matrix: not square");
  if (rho.rows() < 1) throw std::domain_error("density matrix: empty");
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol.hermiticity)
    throw std::domain_error("density matrix: not Hermitian (deviation " + std::to_string(herm) +
                            ")");
  const double tr_dev = std::abs(rho.trace() - std::complex<double>(1.0, 0.0));
  if (tr_dev > tol.trace)
    throw std::domain_error("density matrix: trace != 1 (deviation " + std::to_string(tr_dev) +
                            ")");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < tol.eigenvalue_floor)
    throw std::domain_error("density matrix: negative eigenvalue " + std::to_string(min_eig));
}

Eigen::MatrixXcd evolve_exact(const Eigen::MatrixXcd& rho0, const Hamiltonian& h, double t,
                              const DecoherenceProfile& profile) {
  if (t < 0) throw std::domain_error("evolve_exact: t < 0");
  const Eigen::Index d = h.dim();
  if (rho0.rows() != d || rho0.cols() != d)
    throw std::domain_error("evolve_exact: dimension mismatch between rho0 and Hamiltonian");

  const double lambda_t = lambda_of_t(profile, t);
  Eigen::MatrixXcd rho = rho0;
  for (Eigen::Index m = 0; m < d; ++m) {
    for (Eigen::Index n = 0; n < d; ++n) {
      if (m == n) continue;
      const double gap = h.energies[m] - h.energies[n];
      const std::complex<double> factor =
          std::exp(-0.5 * lambda_t * gap * gap) *
          std::complex<double>(std::cos(gap * t), -std::sin(gap * t));
      rho(m, n) *= factor;
    }
  }
  return rho;
}

namespace {

// Per-chunk running moments for the Welford/Chan deterministic reduction.
struct ChunkMoments {
  std::int64_t n = 0;
  Eigen::MatrixXcd mean;
  Eigen::MatrixXd m2;  // sum of |sample - running mean|^2, entrywise
};

void welford_add(ChunkMoments& acc, const Eigen::MatrixXcd& sample) {
  acc.n += 1;
  const Eigen::MatrixXcd delta = sample - acc.mean;
  acc.mean += delta / static_cast<double>(acc.n);
  acc.m2.noalias() += delta.cwiseProduct((sample - acc.mean).conjugate()).real();
}

void welford_merge(ChunkMoments& into, const ChunkMoments& other) {
  if (other.n == 0) return;
  if (into.n == 0) {
    into = other;
    return;
  }
  const double na = static_cast<double>(into.n), nb = static_cast<double>(other.n);
  const Eigen::MatrixXcd delta = other.mean - into.mean;
  into.mean += delta * (nb / (na + nb));
  into.m2 += other.m2 + delta.cwiseAbs2() * (na * nb / (na + nb));
  into.n += other.n;
}

}  // namespace

MatrixEstimate evolve_mc(const Eigen::MatrixXcd& rho0, const Hamiltonian& h, double t,
                         const DecoherenceProfile& profile, std::int64_t n_paths, SeedSpec seed,
                         const McOptions& options) {
  if (n_paths < 2) throw std::domain_error("evolve_mc: n_paths must be >= 2");
  if (t < 0) throw std::domain_error("evolve_mc: t < 0");
  const Eigen::Index d = h.dim();
  if (rho0.rows() != d || rho0.cols() != d)
    throw std::domain_error("evolve_mc: dimension mismatch between rho0 and Hamiltonian");

  const double lambda_t = lambda_of_t(profile, t);
  const std::size_t chunks = chunk_count(static_cast<std::size_t>(n_paths), kMcChunk);
  std::vector<ChunkMoments> partials(chunks);

  for_each_chunk(static_cast<std::size_t>(n_paths), kMcChunk,
                 [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                   ChunkMoments acc{0, Eigen::MatrixXcd::Zero(d, d), Eigen::MatrixXd::Zero(d, d)};
                   Eigen::VectorXcd phases(d);
                   Eigen::MatrixXcd sample(d, d);
                   for (std::size_t a = begin; a < end; ++a) {
                     const double x = draw_phase_time(t, lambda_t, profile, seed.substream(a),
                                                      options);
                     for (Eigen::Index m = 0; m < d; ++m)
                       phases[m] = std::complex<double>(std::cos(h.energies[m] * x),
                                                        -std::sin(h.energies[m] * x));
                     // rho_mn -> rho_mn z_m conj(z_n); the diagonal is exact
                     // (phases cancel identically), so copy it untouched.
                     for (Eigen::Index m = 0; m < d; ++m) {
                       sample(m, m) = rho0(m, m);
                       for (Eigen::Index n = m + 1; n < d; ++n) {
                         const std::complex<double> v =
                             rho0(m, n) * phases[m] * std::conj(phases[n]);
                         sample(m, n) = v;
                         sample(n, m) = std::conj(v);
                       }
                     }
                     welford_add(acc, sample);
                   }
                   partials[chunk] = std::move(acc);
                 });

  ChunkMoments total{0, Eigen::MatrixXcd::Zero(d, d), Eigen::MatrixXd::Zero(d, d)};
  for (const ChunkMoments& part : partials) welford_merge(total, part);

  const double n = static_cast<double>(total.n);
  const Eigen::MatrixXd std_err = (total.m2 / (n - 1.0)).cwiseSqrt() / std::sqrt(n);
  return {std::move(total.mean), std_err, total.n};
}

}  // namespace dephasim
