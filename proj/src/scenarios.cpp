#include "dephasim/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <vector>

#include "dephasim/csv.hpp"
#include "dephasim/engine.hpp"
#include "dephasim/matrix_io.hpp"
#include "dephasim/observables.hpp"
#include "dephasim/parallel.hpp"
#include "dephasim/svg.hpp"

namespace dephasim {

namespace {

std::vector<double> linspace(double lo, double hi, std::int64_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = hi;
    return out;
  }
  for (std::int64_t i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

int run_pattern(const ScenarioConfig& cfg, bool quiet, std::ostream& summary) {
  const DecoherenceProfile profile = cfg.build_profile();
  const PlaneWavePair pair(cfg.physics.k1, cfg.physics.k2, cfg.physics.mass);
  const McOptions opts = cfg.mc_options();

  const std::vector<double> xs = linspace(cfg.grid.x_min, cfg.grid.x_max, cfg.grid.n_x_samples);
  const std::vector<double> ts = linspace(0.0, cfg.grid.t_max, cfg.grid.n_time_samples);

  CsvWriter csv(cfg.output.csv_path, {"x", "t", "intensity_exact", "intensity_mc", "std_err"});
  PlotSeries exact{"exact (t=t_max)", {}, {}}, mc{"monte carlo (t=t_max)", {}, {}};

  std::uint64_t stream_base = 0;
  for (double t : ts) {
    for (double x : xs) {
      const double ref = damped_pattern(x, t, pair, profile);
      const ScalarEstimate est =
          mc_pattern(x, t, pair, profile, cfg.mc.n_paths,
                     {cfg.mc.master_seed, stream_base}, opts);
      stream_base += static_cast<std::uint64_t>(cfg.mc.n_paths);
      csv.row_numeric({x, t, ref, est.mean, est.std_err});
      if (t == ts.back()) {
        exact.x.push_back(x);
        exact.y.push_back(ref);
        mc.x.push_back(x);
        mc.y.push_back(est.mean);
      }
    }
  }
  if (!cfg.output.plot_path.empty())
    write_svg_line_chart(cfg.output.plot_path, "interference pattern: " + profile.label, "x",
                         "intensity", {exact, mc});
  if (!quiet)
    summary << "pattern: " << xs.size() * ts.size() << " rows -> " << cfg.output.csv_path
            << (cfg.output.plot_path.empty() ? "" : " (plot " + cfg.output.plot_path + ")")
            << "\n";
  return 0;
}

int run_entropy(const ScenarioConfig& cfg, bool quiet, std::ostream& summary) {
  const DecoherenceProfile profile = cfg.build_profile();
  const GaussianPacket packet(cfg.physics.sigma0, cfg.physics.mass);
  const McOptions opts = cfg.mc_options();
  const double p_max =
      cfg.physics.p_max > 0 ? cfg.physics.p_max : 8.0 * packet.momentum_sigma();
  const MomentumGrid grid{p_max, cfg.physics.n_p_points};

  const std::vector<double> ts = linspace(0.0, cfg.grid.t_max, cfg.grid.n_time_samples);
  CsvWriter csv(cfg.output.csv_path,
                {"t", "lambda", "s_lin_oracle", "s_lin_closed", "s_lin_mc", "std_err"});
  PlotSeries oracle{"oracle", {}, {}}, closed{"closed form", {}, {}}, mc{"monte carlo", {}, {}};

  std::uint64_t stream_base = 0;
  for (double t : ts) {
    const double lam = lambda_of_t(profile, t);
    const double s_oracle = linear_entropy_oracle(t, packet, profile);
    const double s_closed = linear_entropy_closed_form(t, packet, profile);
    const ScalarEstimate est = mc_gaussian_entropy(t, packet, profile, grid, cfg.mc.n_paths,
                                                   {cfg.mc.master_seed, stream_base}, opts);
    stream_base += static_cast<std::uint64_t>(cfg.mc.n_paths);
    csv.row_numeric({t, lam, s_oracle, s_closed, est.mean, est.std_err});
    oracle.x.push_back(t);
    oracle.y.push_back(s_oracle);
    closed.x.push_back(t);
    closed.y.push_back(s_closed);
    mc.x.push_back(t);
    mc.y.push_back(est.mean);
  }
  if (!cfg.output.plot_path.empty())
    write_svg_line_chart(cfg.output.plot_path, "linear entropy: " + profile.label, "t",
                         "S_lin", {oracle, closed, mc});
  if (!quiet)
    summary << "entropy: " << ts.size() << " rows -> " << cfg.output.csv_path
            << (cfg.output.plot_path.empty() ? "" : " (plot " + cfg.output.plot_path + ")")
            << "\n";
  return 0;
}

int run_evolve(const ScenarioConfig& cfg, bool quiet, std::ostream& summary) {
  const DecoherenceProfile profile = cfg.build_profile();
  const Hamiltonian h(read_hamiltonian(cfg.physics.hamiltonian_file));
  const Eigen::MatrixXcd rho0 = read_density_matrix(cfg.physics.density_matrix_file);
  validate_density_matrix(rho0);
  if (rho0.rows() != h.dim())
    throw ConfigError("config: Hamiltonian and density matrix dimensions differ");
  const McOptions opts = cfg.mc_options();

  const std::vector<double> ts = linspace(0.0, cfg.grid.t_max, cfg.grid.n_time_samples);
  CsvWriter csv(cfg.output.csv_path,
                {"t", "purity_exact", "purity_mc", "max_abs_dev", "max_std_err"});
  PlotSeries exact{"exact", {}, {}}, mc{"monte carlo", {}, {}};

  std::uint64_t stream_base = 0;
  for (double t : ts) {
    const Eigen::MatrixXcd ref = evolve_exact(rho0, h, t, profile);
    const MatrixEstimate est =
        evolve_mc(rho0, h, t, profile, cfg.mc.n_paths, {cfg.mc.master_seed, stream_base}, opts);
    stream_base += static_cast<std::uint64_t>(cfg.mc.n_paths);
    const double dev = (est.mean - ref).cwiseAbs().maxCoeff();
    csv.row_numeric({t, purity(ref), purity(est.mean), dev, est.std_err.maxCoeff()});
    exact.x.push_back(t);
    exact.y.push_back(purity(ref));
    mc.x.push_back(t);
    mc.y.push_back(purity(est.mean));
  }
  if (!cfg.output.plot_path.empty())
    write_svg_line_chart(cfg.output.plot_path, "purity under dephasing: " + profile.label, "t",
                         "Tr rho^2", {exact, mc});
  if (!quiet)
    summary << "evolve: " << ts.size() << " rows -> " << cfg.output.csv_path
            << (cfg.output.plot_path.empty() ? "" : " (plot " + cfg.output.plot_path + ")")
            << "\n";
  return 0;
}

int run_classify(const ScenarioConfig& cfg, bool quiet, std::ostream& summary) {
  std::vector<DecoherenceProfile> profiles;
  if (cfg.profile.type == "builtins")
    profiles = builtin_profiles();
  else
    profiles.push_back(cfg.build_profile());

  CsvWriter csv(cfg.output.csv_path, {"profile", "fitted_exponent", "regime"});
  for (const DecoherenceProfile& p : profiles) {
    const RegimeClass rc = classify_regime(p, cfg.classify.horizon, cfg.classify.window);
    csv.row({p.label, format_number(rc.fitted_exponent), regime_name(rc.regime)});
  }
  if (!quiet)
    summary << "classify: " << profiles.size() << " rows -> " << cfg.output.csv_path << "\n";
  return 0;
}

int run_moments(const ScenarioConfig& cfg, bool quiet, std::ostream& summary) {
  const DecoherenceProfile profile = cfg.build_profile();
  const McOptions opts = cfg.mc_options();
  const int n_max = cfg.moments.n_max;

  // ODE table on a grid that refines the sample times.
  const std::int64_t segments = cfg.grid.n_time_samples - 1;
  const std::int64_t per_segment = std::max<std::int64_t>(
      1, (cfg.mc.n_steps_per_unit_time * static_cast<std::int64_t>(std::ceil(cfg.grid.t_max)) +
          segments - 1) /
             segments);
  const TimeGrid ode_grid(cfg.grid.t_max, segments * per_segment);
  const MomentTable table = moment_recursion(n_max, profile.sigma, ode_grid);

  const std::vector<double> ts = linspace(0.0, cfg.grid.t_max, cfg.grid.n_time_samples);
  CsvWriter csv(cfg.output.csv_path, {"n", "t", "beta_closed", "beta_ode", "beta_mc", "std_err"});

  std::vector<PlotSeries> series;
  std::uint64_t stream_base = 0;
  std::vector<double> power_sums(2 * n_max + 1);

  for (std::int64_t j = 0; j < cfg.grid.n_time_samples; ++j) {
    const double t = ts[j];
    const double lam = lambda_of_t(profile, t);

    // One ensemble of centered samples per time, reused for every order.
    const std::size_t np = static_cast<std::size_t>(cfg.mc.n_paths);
    const std::size_t chunks = chunk_count(np, kMcChunk);
    std::vector<std::vector<double>> partial(chunks,
                                             std::vector<double>(2 * n_max + 1, 0.0));
    for_each_chunk(np, kMcChunk, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
      std::vector<double>& sums = partial[chunk];
      for (std::size_t a = begin; a < end; ++a) {
        const double y =
            draw_phase_time(t, lam, profile, {cfg.mc.master_seed, stream_base + a}, opts) - t;
        double pw = 1.0;
        for (int n = 1; n <= 2 * n_max; ++n) {
          pw *= y;
          sums[n] += pw;
        }
      }
    });
    stream_base += static_cast<std::uint64_t>(cfg.mc.n_paths);
    std::fill(power_sums.begin(), power_sums.end(), 0.0);
    for (const auto& sums : partial)
      for (int n = 1; n <= 2 * n_max; ++n) power_sums[n] += sums[n];

    for (int n = 1; n <= n_max; ++n) {
      const double mean = power_sums[n] / static_cast<double>(cfg.mc.n_paths);
      const double mean_sq = power_sums[2 * n] / static_cast<double>(cfg.mc.n_paths);
      const double var = std::max(0.0, mean_sq - mean * mean);
      const double std_err = std::sqrt(var / static_cast<double>(cfg.mc.n_paths - 1));
      const double closed = moment_closed_form(n, lam);
      const double ode = table.at(j * per_segment, n);
      csv.row_numeric({static_cast<double>(n), t, closed, ode, mean, std_err});

      if (n % 2 == 0) {
        if (j == 0) {
          char label[32];
          std::snprintf(label, sizeof(label), "closed n=%d", n);
          series.push_back({label, {}, {}});
          std::snprintf(label, sizeof(label), "mc n=%d", n);
          series.push_back({label, {}, {}});
        }
        const std::size_t base = static_cast<std::size_t>(n - 2);  // n=2 -> series 0,1
        series[base].x.push_back(t);
        series[base].y.push_back(closed);
        series[base + 1].x.push_back(t);
        series[base + 1].y.push_back(mean);
      }
    }
  }
  if (!cfg.output.plot_path.empty())
    write_svg_line_chart(cfg.output.plot_path, "phase-time central moments: " + profile.label,
                         "t", "beta_n", series);
  if (!quiet)
    summary << "moments: " << ts.size() * static_cast<std::size_t>(n_max) << " rows -> "
            << cfg.output.csv_path << "\n";
  return 0;
}

}  // namespace

int run_scenario(const ScenarioConfig& config, bool quiet, std::ostream& summary) {
  switch (config.scenario) {
    case ScenarioType::Pattern:
      return run_pattern(config, quiet, summary);
    case ScenarioType::Entropy:
      return run_entropy(config, quiet, summary);
    case ScenarioType::Evolve:
      return run_evolve(config, quiet, summary);
    case ScenarioType::Classify:
      return run_classify(config, quiet, summary);
    case ScenarioType::Moments:
      return run_moments(config, quiet, summary);
    case ScenarioType::Selfcheck:
      return run_selfcheck(config.mc.master_seed, config.selfcheck_inject, summary) ? 0 : 3;
  }
  return 1;
}

// ---------------------------------------------------------------------------
// Self-check suite.

namespace {

struct CheckReporter {
  std::ostream& out;
  int passed = 0;
  int total = 0;

  void result(bool ok, const std::string& name, const std::string& detail) {
    ++total;
    if (ok) ++passed;
    char line[256];
    std::snprintf(line, sizeof(line), "[%s] %-34s %s", ok ? "ok" : "FAIL", name.c_str(),
                  detail.c_str());
    out << line << "\n";
  }
};

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

}  // namespace

bool run_selfcheck(std::uint64_t master_seed, const std::string& inject, std::ostream& report) {
  if (!inject.empty() && inject != "moment-constant")
    throw ConfigError("selfcheck: unknown injection '" + inject + "'");
  // Fault injection: scales the closed-form moment constants so the moment
  // checks must fail; verifies the harness actually detects failures.
  const double moment_fudge = inject == "moment-constant" ? 1.05 : 1.0;

  report << "dephasim selfcheck (seed " << master_seed << ")\n";
  CheckReporter check{report};

  const DecoherenceProfile markov = markovian_profile();

  {  // Moment ODE hierarchy vs closed forms.
    const TimeGrid grid(2.0, 2000);
    const MomentTable table = moment_recursion(6, markov.sigma, grid);
    double worst = 0.0;
    for (int n = 2; n <= 6; ++n) {
      const double closed = moment_fudge * moment_closed_form(n, lambda_of_t(markov, 2.0));
      const double rel = std::abs(table.at(2000, n) - closed) / std::max(1.0, std::abs(closed));
      worst = std::max(worst, rel);
    }
    check.result(worst < 1e-5, "moment recursion vs closed form",
                 "max rel dev " + fmt3(worst) + " (tol 1e-05)");
  }

  {  // Pathwise MC moments vs closed forms, 3 SE.
    const std::int64_t n_paths = 20000;
    const double t = 1.0;
    const std::size_t np = static_cast<std::size_t>(n_paths);
    std::vector<std::vector<double>> partial(chunk_count(np, kMcChunk),
                                             std::vector<double>(13, 0.0));
    for_each_chunk(np, kMcChunk, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
      for (std::size_t a = begin; a < end; ++a) {
        const double y = sample_phase_time(t, markov, {master_seed, a}, 1000).x - t;
        double pw = 1.0;
        for (int n = 1; n <= 12; ++n) {
          pw *= y;
          partial[chunk][n] += pw;
        }
      }
    });
    std::vector<double> sums(13, 0.0);
    for (const auto& p : partial)
      for (int n = 1; n <= 12; ++n) sums[n] += p[n];

    bool ok = true;
    double worst_pull = 0.0;
    for (int n = 1; n <= 6; ++n) {
      const double mean = sums[n] / static_cast<double>(n_paths);
      const double var =
          std::max(0.0, sums[2 * n] / static_cast<double>(n_paths) - mean * mean);
      const double se = std::sqrt(var / static_cast<double>(n_paths - 1));
      const double closed = moment_fudge * moment_closed_form(n, 1.0);
      const double pull = std::abs(mean - closed) / se;
      worst_pull = std::max(worst_pull, pull);
      if (pull > 3.0) ok = false;
    }
    check.result(ok, "pathwise MC moments (n<=6)",
                 "worst |mean-closed|/SE " + fmt3(worst_pull) + " (tol 3)");
  }

  {  // erf integral identity.
    double worst = 0.0;
    for (double z : {0.1, 1.0, 4.0, 25.0}) {
      const IdentityCheck id = erf_integral_identity(z);
      worst = std::max(worst, std::abs(id.quadrature - id.closed_form));
    }
    check.result(worst < 1e-8, "erf integral identity", "max |dev| " + fmt3(worst) + " (tol 1e-08)");
  }

  {  // Engine MC vs exact on a fixed d=4 state.
    Eigen::VectorXd energies(4);
    energies << 0.0, 0.7, 1.3, 2.1;
    const Hamiltonian h(energies);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(4, std::complex<double>(0.5, 0.0));
    const Eigen::MatrixXcd rho0 = psi * psi.adjoint();
    const double t = 0.8;
    const Eigen::MatrixXcd ref = evolve_exact(rho0, h, t, markov);
    const MatrixEstimate est = evolve_mc(rho0, h, t, markov, 20000, {master_seed, 1u << 20});
    int within = 0, off_diag = 0;
    double worst = 0.0;
    for (Eigen::Index m = 0; m < 4; ++m)
      for (Eigen::Index n = 0; n < 4; ++n) {
        if (m == n) continue;
        ++off_diag;
        const double pull = std::abs(est.mean(m, n) - ref(m, n)) / est.std_err(m, n);
        worst = std::max(worst, pull);
        if (pull <= 3.0) ++within;
      }
    const bool ok = within >= off_diag * 9 / 10 && worst < 6.0;
    check.result(ok, "evolve_mc vs evolve_exact (d=4)",
                 std::to_string(within) + "/" + std::to_string(off_diag) +
                     " coherences within 3 SE, worst pull " + fmt3(worst));
  }

  {  // Entropy bounds, start at zero, monotone.
    const GaussianPacket packet(1.0, 1.0);
    double prev = -1.0;
    bool ok = true;
    for (double t : {0.0, 0.5, 1.0, 2.0, 5.0}) {
      const double s = linear_entropy_closed_form(t, packet, markov);
      if (s < 0.0 || s > 1.0 || s < prev - 1e-9) ok = false;
      if (t == 0.0 && s != 0.0) ok = false;
      prev = s;
    }
    check.result(ok, "entropy bounds and monotonicity", "S(0)=0, S in [0,1], nondecreasing");
  }

  {  // SubMarkovian saturation below 1.
    const GaussianPacket packet(1.0, 1.0);
    const DecoherenceProfile sub = submarkovian_profile();
    const double s20 = linear_entropy_closed_form(20.0, packet, sub);
    const double s40 = linear_entropy_closed_form(40.0, packet, sub);
    const bool ok = std::abs(s40 - s20) < 1e-4 && s40 < 1.0;
    check.result(ok, "submarkovian saturation",
                 "|S(40)-S(20)| " + fmt3(std::abs(s40 - s20)) + ", S(40) " + fmt3(s40));
  }

  {  // Regime classification of the four built-ins.
    const Regime expected[4] = {Regime::Markovian, Regime::SubMarkovian, Regime::SuperMarkovianI,
                                Regime::SuperMarkovianII};
    const std::vector<DecoherenceProfile> profiles = builtin_profiles();
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 4; ++i) {
      const RegimeClass rc = classify_regime(profiles[i]);
      if (rc.regime != expected[i]) ok = false;
      if (i) detail += " ";
      detail += format_number(rc.fitted_exponent);
    }
    check.result(ok, "regime classification (builtins)", "fitted exponents " + detail);
  }

  {  // Entropy ordering across regimes, profiles calibrated to lambda(1)=1.
    const GaussianPacket packet(1.0, 1.0);
    const double t = 10.0;
    const double s_m = linear_entropy_closed_form(t, packet, markovian_profile(1.0));
    const double s_sub = linear_entropy_closed_form(
        t, packet, submarkovian_profile(std::sqrt(2.0 / (1.0 - std::exp(-2.0))), 1.0));
    const double s_1 = linear_entropy_closed_form(
        t, packet, super1_profile(std::sqrt(0.5 / (std::sqrt(2.0) - 1.0))));
    const double s_2 = linear_entropy_closed_form(t, packet, super2_profile(std::sqrt(2.0)));
    const bool ok = s_2 >= s_m && s_m >= s_1 && s_1 >= s_sub;
    check.result(ok, "regime entropy ordering (t=10)",
                 "II " + fmt3(s_2) + " >= M " + fmt3(s_m) + " >= I " + fmt3(s_1) + " >= Sub " +
                     fmt3(s_sub));
  }

  {  // MC pattern vs damped pattern; decoherence-free case exact.
    const PlaneWavePair pair(1.0, 0.0, 0.5);  // energy gap 1
    const ScalarEstimate est = mc_pattern(0.0, 1.0, pair, markov, 20000, {master_seed, 1u << 21});
    const double ref = damped_pattern(0.0, 1.0, pair, markov);
    const double pull = std::abs(est.mean - ref) / est.std_err;
    const PlaneWavePair free_pair(1.0, -1.0, 0.5);  // energy gap 0
    const ScalarEstimate free_est =
        mc_pattern(0.5, 1.0, free_pair, markov, 100, {master_seed, 1u << 22});
    const bool ok = pull <= 3.0 && free_est.std_err == 0.0;
    check.result(ok, "mc pattern vs damped pattern",
                 "pull " + fmt3(pull) + ", decoherence-free variance " + fmt3(free_est.std_err));
  }

  {  // Trig expectations vs MC.
    bool ok = true;
    double worst = 0.0;
    std::uint64_t stream = 1u << 23;
    for (double a : {0.5, 1.0, 2.0}) {
      for (double t : {0.5, 2.0}) {
        const auto [ec, es] = expect_trig(a, t, markov);
        double sum_c = 0, sum_s = 0, sq_c = 0, sq_s = 0;
        const std::int64_t n = 20000;
        for (std::int64_t i = 0; i < n; ++i) {
          const double x =
              sample_phase_time_direct(t, markov, {master_seed, stream + static_cast<std::uint64_t>(i)}).x;
          const double c = std::cos(a * x), s = std::sin(a * x);
          sum_c += c;
          sum_s += s;
          sq_c += c * c;
          sq_s += s * s;
        }
        stream += static_cast<std::uint64_t>(n);
        const double nn = static_cast<double>(n);
        const double mc = sum_c / nn, ms = sum_s / nn;
        const double se_c = std::sqrt(std::max(1e-30, (sq_c / nn - mc * mc) / (nn - 1)));
        const double se_s = std::sqrt(std::max(1e-30, (sq_s / nn - ms * ms) / (nn - 1)));
        worst = std::max({worst, std::abs(mc - ec) / se_c, std::abs(ms - es) / se_s});
      }
    }
    ok = worst <= 3.0;
    check.result(ok, "trig expectations vs MC", "worst pull " + fmt3(worst) + " (tol 3)");
  }

  report << "selfcheck: " << check.passed << "/" << check.total << " checks passed\n";
  return check.passed == check.total;
}

}  // namespace dephasim
