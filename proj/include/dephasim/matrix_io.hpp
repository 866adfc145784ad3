#pragma once

#include <Eigen/Core>
#include <string>

namespace dephasim {

/// Density matrix file: first line d, then d rows of d comma-separated
/// complex entries written as "a+bi" (e.g. "0.5+0i, 0.25-0.1i").
Eigen::MatrixXcd read_density_matrix(const std::string& path);
void write_density_matrix(const std::string& path, const Eigen::MatrixXcd& rho);

/// Hamiltonian file: first line d, second line d comma-separated energies.
Eigen::VectorXd read_hamiltonian(const std::string& path);
void write_hamiltonian(const std::string& path, const Eigen::VectorXd& energies);

}  // namespace dephasim
