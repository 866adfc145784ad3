#include "dephasim/stochastic.hpp"

#include <cmath>
#include <stdexcept>

namespace dephasim {

BrownianPath sample_brownian_path(const TimeGrid& grid, SeedSpec seed) {
  RandomStream stream(seed);
  const double sqrt_h = std::sqrt(grid.step());
  Eigen::VectorXd dB(grid.n_steps);
  stream.fill_normal(dB.data(), static_cast<std::size_t>(grid.n_steps));
  dB *= sqrt_h;
  return {grid, std::move(dB)};
}

double ito_integral(const std::function<double(double)>& sigma, const BrownianPath& path) {
  const double h = path.grid.step();
  double sum = 0.0;
  for (std::int64_t k = 0; k < path.grid.n_steps; ++k)
    sum += sigma(static_cast<double>(k) * h) * path.increments[k];
  return sum;
}

PhaseTimeSample sample_phase_time(double t, const DecoherenceProfile& profile, SeedSpec seed,
                                  std::int64_t n_steps) {
  if (t < 0) throw std::domain_error("sample_phase_time: t < 0");
  if (t == 0) return {0.0, 0.0};
  const BrownianPath path = sample_brownian_path(TimeGrid(t, n_steps), seed);
  return {t, t + ito_integral(profile.sigma, path)};
}

PhaseTimeSample sample_phase_time_direct(double t, const DecoherenceProfile& profile,
                                         SeedSpec seed) {
  if (t < 0) throw std::domain_error("sample_phase_time_direct: t < 0");
  if (t == 0) return {0.0, 0.0};
  RandomStream stream(seed);
  return {t, t + std::sqrt(lambda_of_t(profile, t)) * stream.normal()};
}

double draw_phase_time(double t, double lambda_t, const DecoherenceProfile& profile, SeedSpec seed,
                       const McOptions& options) {
  if (t == 0) return 0.0;
  if (options.sampler == PhaseSampler::DirectGaussian) {
    RandomStream stream(seed);
    return t + std::sqrt(lambda_t) * stream.normal();
  }
  const auto n_steps =
      std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(options.steps_per_unit_time * t)));
  return sample_phase_time(t, profile, seed, n_steps).x;
}

double moment_closed_form(int n, double lambda_t) {
  if (n < 0) throw std::domain_error("moment_closed_form: n < 0");
  if (lambda_t < 0) throw std::domain_error("moment_closed_form: lambda < 0");
  if (n % 2 == 1) return 0.0;
  // (2k)!/(2^k k!) = (2k-1)!!
  double result = 1.0;
  for (int j = 1; j < n; j += 2) result *= static_cast<double>(j);
  const int k = n / 2;
  for (int j = 0; j < k; ++j) result *= lambda_t;
  return result;
}

MomentTable moment_recursion(int n_max, const std::function<double(double)>& sigma,
                             const TimeGrid& grid) {
  if (n_max < 2) throw std::domain_error("moment_recursion: n_max must be >= 2");

  const int cols = n_max + 1;
  Eigen::MatrixXd table(grid.n_steps + 1, cols);

  // State is (beta_2 .. beta_n_max); beta_0 = 1 and beta_1 = 0 are constants.
  Eigen::VectorXd state = Eigen::VectorXd::Zero(cols);
  state[0] = 1.0;

  auto derivative = [&](double t, const Eigen::VectorXd& b) {
    Eigen::VectorXd db = Eigen::VectorXd::Zero(cols);
    const double s2 = sigma(t) * sigma(t);
    for (int n = 2; n < cols; ++n) db[n] = 0.5 * n * (n - 1) * s2 * b[n - 2];
    return db;
  };

  table.row(0) = state.transpose();
  const double h = grid.step();
  for (std::int64_t k = 0; k < grid.n_steps; ++k) {
    const double t = grid.time_at(k);
    const Eigen::VectorXd k1 = derivative(t, state);
    const Eigen::VectorXd k2 = derivative(t + 0.5 * h, state + 0.5 * h * k1);
    const Eigen::VectorXd k3 = derivative(t + 0.5 * h, state + 0.5 * h * k2);
    const Eigen::VectorXd k4 = derivative(t + h, state + h * k3);
    state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    table.row(k + 1) = state.transpose();
  }
  return {grid, std::move(table)};
}

std::pair<double, double> expect_trig(double a, double t, const DecoherenceProfile& profile) {
  if (t < 0) throw std::domain_error("expect_trig: t < 0");
  const double damp = std::exp(-0.5 * a * a * lambda_of_t(profile, t));
  return {damp * std::cos(a * t), damp * std::sin(a * t)};
}

}  // namespace dephasim
