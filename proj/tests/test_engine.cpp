#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>

#include "dephasim/engine.hpp"
#include "dephasim/matrix_io.hpp"
#include "dephasim/rng.hpp"

using namespace dephasim;
using Complex = std::complex<double>;

namespace {

/// Random pure-state-mixture density matrix: A A^dagger / tr, A Gaussian.
Eigen::MatrixXcd random_density_matrix(Eigen::Index d, SeedSpec seed) {
  RandomStream stream(seed);
  Eigen::MatrixXcd a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = Complex(stream.normal(), stream.normal());
  Eigen::MatrixXcd rho = a * a.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) / 2.0;  // bit-exact Hermitian
}

Hamiltonian random_hamiltonian(Eigen::Index d, SeedSpec seed) {
  RandomStream stream(seed);
  Eigen::VectorXd e(d);
  for (Eigen::Index i = 0; i < d; ++i) e[i] = 4.0 * stream.uniform01() - 2.0;
  return Hamiltonian(e);
}

const DecoherenceProfile kMarkov = markovian_profile();

}  // namespace

TEST_CASE("Hamiltonian validation") {
  CHECK_THROWS_AS(Hamiltonian{Eigen::VectorXd()}, std::domain_error);
  Eigen::VectorXd bad(2);
  bad << 1.0, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(Hamiltonian{bad}, std::domain_error);
}

TEST_CASE("validate_density_matrix accepts valid states and names violations") {
  validate_density_matrix(random_density_matrix(5, {1, 0}));

  Eigen::MatrixXcd not_herm = Eigen::MatrixXcd::Identity(2, 2) / 2.0;
  not_herm(0, 1) = Complex(0.1, 0.0);
  CHECK_THROWS_WITH_AS(validate_density_matrix(not_herm), doctest::Contains("Hermitian"),
                       std::domain_error);

  const Eigen::MatrixXcd bad_trace = Eigen::MatrixXcd::Identity(2, 2);
  CHECK_THROWS_WITH_AS(validate_density_matrix(bad_trace), doctest::Contains("trace"),
                       std::domain_error);

  Eigen::MatrixXcd neg(2, 2);
  neg << 0.75, 0.5, 0.5, 0.25;
  CHECK_THROWS_WITH_AS(validate_density_matrix(neg), doctest::Contains("eigenvalue"),
                       std::domain_error);
}

TEST_CASE("purity: pure, mixed, dephased") {
  Eigen::MatrixXcd pure(2, 2);
  pure << 0.5, 0.5, 0.5, 0.5;
  CHECK(purity(pure) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(purity(Eigen::MatrixXcd::Identity(2, 2) / 2.0) == doctest::Approx(0.5));
  Eigen::MatrixXcd dephased(2, 2);
  dephased << 0.5, 0.25, 0.25, 0.5;
  CHECK(purity(dephased) == doctest::Approx(0.625).epsilon(1e-14));
  CHECK(linear_entropy(dephased) == doctest::Approx(0.375).epsilon(1e-14));
}

TEST_CASE("evolve_exact: populations are untouched by dephasing") {
  const Hamiltonian h = random_hamiltonian(6, {2, 0});
  const Eigen::MatrixXcd rho0 = random_density_matrix(6, {2, 1});
  for (const DecoherenceProfile& prof : builtin_profiles()) {
    const Eigen::MatrixXcd rho = evolve_exact(rho0, h, 2.7, prof);
    for (Eigen::Index m = 0; m < 6; ++m)
      CHECK(rho(m, m) == rho0(m, m));  // bit-exact: diagonal never multiplied
  }
}

TEST_CASE("evolve_exact: two-level coherence halves at t = ln 4 (Markovian)") {
  Eigen::VectorXd e(2);
  e << 0.0, 1.0;
  Eigen::MatrixXcd rho0(2, 2);
  rho0 << 0.5, 0.5, 0.5, 0.5;
  const double t = std::log(4.0);
  const Eigen::MatrixXcd rho = evolve_exact(rho0, Hamiltonian(e), t, kMarkov);
  CHECK(std::abs(rho(0, 1)) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::abs(rho(1, 0)) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("evolve_exact: lambda == 0 reduces to unitary precession") {
  const DecoherenceProfile none = profile_from_expression("0");
  const Hamiltonian h = random_hamiltonian(4, {3, 0});
  const Eigen::MatrixXcd rho0 = random_density_matrix(4, {3, 1});
  const double t = 1.234;
  const Eigen::MatrixXcd rho = evolve_exact(rho0, h, t, none);

  Eigen::VectorXcd u(4);
  for (Eigen::Index m = 0; m < 4; ++m)
    u[m] = std::exp(Complex(0.0, -h.energies[m] * t));
  const Eigen::MatrixXcd expected = u.asDiagonal() * rho0 * u.asDiagonal().toDenseMatrix().adjoint();
  CHECK((rho - expected).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(purity(rho) == doctest::Approx(purity(rho0)).epsilon(1e-13));
}

TEST_CASE("evolve_exact: dimension mismatch is a domain error") {
  Eigen::VectorXd e(3);
  e << 0, 1, 2;
  CHECK_THROWS_AS(evolve_exact(random_density_matrix(2, {4, 0}), Hamiltonian(e), 1.0, kMarkov),
                  std::domain_error);
}

TEST_CASE("evolve_exact output stays a valid density matrix (random d <= 8)") {
  for (int trial = 0; trial < 12; ++trial) {
    const Eigen::Index d = 2 + trial % 7;
    const Hamiltonian h = random_hamiltonian(d, {50, static_cast<std::uint64_t>(trial)});
    const Eigen::MatrixXcd rho0 =
        random_density_matrix(d, {51, static_cast<std::uint64_t>(trial)});
    const DecoherenceProfile& prof = builtin_profiles()[trial % 4];
    const Eigen::MatrixXcd rho = evolve_exact(rho0, h, 0.5 + 0.3 * trial, prof);
    validate_density_matrix(rho);  // Hermitian 1e-12, trace 1e-12, eigs >= -1e-10
  }
}

TEST_CASE("evolve_exact satisfies the master equation (finite differences)") {
  // d rho / dt = -i [H, rho] - (sigma(t)^2 / 2) [H, [H, rho]] at interior t.
  const Hamiltonian h = random_hamiltonian(5, {60, 0});
  const Eigen::MatrixXcd rho0 = random_density_matrix(5, {61, 0});
  for (const DecoherenceProfile& prof : builtin_profiles()) {
    CAPTURE(prof.label);
    for (double t : {0.4, 1.0, 1.9}) {
      const double dt = 1e-4;
      const Eigen::MatrixXcd rho = evolve_exact(rho0, h, t, prof);
      const Eigen::MatrixXcd drho =
          (evolve_exact(rho0, h, t + dt, prof) - evolve_exact(rho0, h, t - dt, prof)) /
          (2.0 * dt);

      const Eigen::MatrixXcd hm = h.energies.cast<Complex>().asDiagonal();
      const Eigen::MatrixXcd comm = hm * rho - rho * hm;
      const Eigen::MatrixXcd dcomm = hm * comm - comm * hm;
      const double s2 = prof.sigma(t) * prof.sigma(t);
      const Eigen::MatrixXcd rhs = Complex(0.0, -1.0) * comm - 0.5 * s2 * dcomm;

      const double scale = std::max(1e-12, rhs.cwiseAbs().maxCoeff());
      CHECK((drho - rhs).cwiseAbs().maxCoeff() / scale < 1e-6);
    }
  }
}

TEST_CASE("evolve_exact: Markovian semigroup property") {
  const Hamiltonian h = random_hamiltonian(6, {70, 0});
  const Eigen::MatrixXcd rho0 = random_density_matrix(6, {71, 0});
  const double t1 = 0.6, t2 = 1.1;
  const Eigen::MatrixXcd once = evolve_exact(rho0, h, t1 + t2, kMarkov);
  const Eigen::MatrixXcd twice = evolve_exact(evolve_exact(rho0, h, t1, kMarkov), h, t2, kMarkov);
  CHECK((once - twice).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("purity is nonincreasing in lambda along every built-in profile") {
  const Hamiltonian h = random_hamiltonian(5, {80, 0});
  const Eigen::MatrixXcd rho0 = random_density_matrix(5, {81, 0});
  for (const DecoherenceProfile& prof : builtin_profiles()) {
    CAPTURE(prof.label);
    double prev = 2.0;
    for (int k = 0; k <= 20; ++k) {
      const double p = purity(evolve_exact(rho0, h, 0.25 * k, prof));
      CHECK(p <= prev + 1e-12);
      prev = p;
    }
  }
}

TEST_CASE("evolve_mc: no-noise limit is exact with zero variance") {
  const DecoherenceProfile none = profile_from_expression("0");
  const Hamiltonian h = random_hamiltonian(4, {90, 0});
  const Eigen::MatrixXcd rho0 = random_density_matrix(4, {91, 0});
  const MatrixEstimate est = evolve_mc(rho0, h, 0.9, none, 100, {92, 0});
  CHECK(est.std_err.maxCoeff() == 0.0);
  CHECK((est.mean - evolve_exact(rho0, h, 0.9, none)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("evolve_mc: diagonal entries are exact for every path") {
  const Hamiltonian h = random_hamiltonian(5, {100, 0});
  const Eigen::MatrixXcd rho0 = random_density_matrix(5, {101, 0});
  const MatrixEstimate est = evolve_mc(rho0, h, 1.5, kMarkov, 500, {102, 0});
  for (Eigen::Index m = 0; m < 5; ++m) {
    CHECK(est.mean(m, m) == rho0(m, m));
    CHECK(est.std_err(m, m) == 0.0);
  }
}

TEST_CASE("evolve_mc: two-level case converges to evolve_exact (1e5 paths)") {
  Eigen::VectorXd e(2);
  e << 0.0, 1.0;
  Eigen::MatrixXcd rho0(2, 2);
  rho0 << 0.5, 0.5, 0.5, 0.5;
  const Hamiltonian h(e);
  const double t = std::log(4.0);
  const MatrixEstimate est = evolve_mc(rho0, h, t, kMarkov, 100000, {110, 0});
  const Eigen::MatrixXcd ref = evolve_exact(rho0, h, t, kMarkov);
  CHECK(std::abs(est.mean(0, 1) - ref(0, 1)) < 3.0 * est.std_err(0, 1));
  CHECK(std::abs(std::abs(est.mean(0, 1)) - 0.25) < 3.0 * est.std_err(0, 1));
}

TEST_CASE("evolve_mc: pathwise sampler agrees too") {
  Eigen::VectorXd e(2);
  e << 0.0, 1.0;
  Eigen::MatrixXcd rho0(2, 2);
  rho0 << 0.5, 0.5, 0.5, 0.5;
  const Hamiltonian h(e);
  McOptions opts;
  opts.sampler = PhaseSampler::PathwiseIto;
  const MatrixEstimate est = evolve_mc(rho0, h, 1.0, kMarkov, 20000, {111, 0}, opts);
  const Eigen::MatrixXcd ref = evolve_exact(rho0, h, 1.0, kMarkov);
  CHECK(std::abs(est.mean(0, 1) - ref(0, 1)) < 3.0 * est.std_err(0, 1));
}

TEST_CASE("evolve_mc: n_paths < 2 is a domain error") {
  CHECK_THROWS_AS(evolve_mc(random_density_matrix(2, {120, 0}), random_hamiltonian(2, {121, 0}),
                            1.0, kMarkov, 1, {122, 0}),
                  std::domain_error);
}

TEST_CASE("evolve_mc is reproducible and worker-independent") {
  const Hamiltonian h = random_hamiltonian(3, {130, 0});
  const Eigen::MatrixXcd rho0 = random_density_matrix(3, {131, 0});
  const MatrixEstimate a = evolve_mc(rho0, h, 1.2, kMarkov, 5000, {132, 9});
  setenv("DEPHASIM_THREADS", "5", 1);
  const MatrixEstimate b = evolve_mc(rho0, h, 1.2, kMarkov, 5000, {132, 9});
  unsetenv("DEPHASIM_THREADS");
  CHECK((a.mean - b.mean).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.std_err - b.std_err).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("density matrix file round trip") {
  const Eigen::MatrixXcd rho = random_density_matrix(4, {140, 0});
  const std::string path = "test_rho_roundtrip.txt";
  write_density_matrix(path, rho);
  const Eigen::MatrixXcd back = read_density_matrix(path);
  CHECK((rho - back).cwiseAbs().maxCoeff() == 0.0);  // %.17g is lossless
  std::remove(path.c_str());
}

TEST_CASE("density matrix file parsing accepts documented forms and rejects junk") {
  const std::string path = "test_rho_forms.txt";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("2\n0.5+0i, 0.25-0.1i\n0.25+0.1i, 0.5\n", f);
    std::fclose(f);
  }
  const Eigen::MatrixXcd rho = read_density_matrix(path);
  CHECK(rho(0, 0) == Complex(0.5, 0.0));
  CHECK(rho(0, 1) == Complex(0.25, -0.1));
  CHECK(rho(1, 0) == Complex(0.25, 0.1));
  CHECK(rho(1, 1) == Complex(0.5, 0.0));
  std::remove(path.c_str());

  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("2\n0.5, nope\n0, 0.5\n", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(read_density_matrix(path), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("hamiltonian file round trip") {
  Eigen::VectorXd e(3);
  e << -1.0, 0.25, 2.0;
  const std::string path = "test_h_roundtrip.txt";
  write_hamiltonian(path, e);
  CHECK((read_hamiltonian(path) - e).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}
