#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

#include "dephasim/estimate.hpp"
#include "dephasim/profiles.hpp"
#include "dephasim/rng.hpp"
#include "dephasim/stochastic.hpp"

namespace dephasim {

/// The system Hamiltonian, given by its spectrum. All engine states are
/// expressed in this eigenbasis, so evolution operators are diagonal phases.
struct Hamiltonian {
  explicit Hamiltonian(Eigen::VectorXd energies);

  Eigen::VectorXd energies;
  Eigen::Index dim() const { return energies.size(); }
};

struct DensityMatrixTolerances {
  double hermiticity = 1e-12;
  double trace = 1e-12;
  double eigenvalue_floor = -1e-10;  // MC averages may dip negative by rounding
};

/// Throws std::domain_error naming the violated property (Hermiticity,
/// unit trace, positivity) if rho is not a valid density matrix.
void validate_density_matrix(const Eigen::MatrixXcd& rho,
                             const DensityMatrixTolerances& tol = {});

/// Tr rho^2 = sum |rho_mn|^2 for Hermitian rho.
template <typename Derived>
double purity(const Eigen::MatrixBase<Derived>& rho) {
  return rho.squaredNorm();
}

template <typename Derived>
double linear_entropy(const Eigen::MatrixBase<Derived>& rho) {
  return 1.0 - purity(rho);
}

/// Exact dephasing propagator in the energy eigenbasis:
///   rho_mn(t) = rho_mn(0) e^{-i (E_m - E_n) t} e^{-(lambda(t)/2)(E_m - E_n)^2}.
/// Populations are untouched; coherences precess and decay with the
/// accumulated noise variance lambda(t).
Eigen::MatrixXcd evolve_exact(const Eigen::MatrixXcd& rho0, const Hamiltonian& h, double t,
                              const DecoherenceProfile& profile);

/// Monte Carlo evolution: averages U_st rho0 U_st^dagger over random phase
/// times X_t, with U_st the diagonal phases e^{-i E_m X_t}. Paths are
/// processed in fixed chunks with deterministic merge order, so the result
/// is bit-identical for any worker count; path i uses seed.substream(i).
MatrixEstimate evolve_mc(const Eigen::MatrixXcd& rho0, const Hamiltonian& h, double t,
                         const DecoherenceProfile& profile, std::int64_t n_paths, SeedSpec seed,
                         const McOptions& options = {});

}  // namespace dephasim
