#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "dephasim/config.hpp"
#include "dephasim/matrix_io.hpp"
#include "dephasim/scenarios.hpp"

using namespace dephasim;

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout only
};

/// Runs the CLI binary via popen; extra is appended after the binary path.
RunResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + DEPHASIM_BIN_PATH + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string output;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

constexpr const char* kPatternCfg =
    "scenario = pattern\n"
    "[profile]\ntype = markovian\nsigma0 = 1\n"
    "[grid]\nt_max = 1\nn_time_samples = 2\nx_min = 0\nx_max = 3\nn_x_samples = 3\n"
    "[mc]\nn_paths = 2000\nmaster_seed = 7\n"
    "[physics]\nk1 = 1\nk2 = 0\nmass = 0.5\n"
    "[output]\ncsv_path = cli_pattern.csv\n";

}  // namespace

TEST_CASE("ini parsing: sections, comments, overrides") {
  IniFile ini = IniFile::parse_string(
      "scenario = entropy  # trailing comment\n"
      "[mc]\n"
      "n_paths = 50\n"
      "; full-line comment\n"
      "[output]\n"
      "csv_path = x.csv\n");
  CHECK(ini.sections[""]["scenario"] == "entropy");
  CHECK(ini.sections["mc"]["n_paths"] == "50");
  ini.set_override("mc.n_paths=99");
  ini.set_override("scenario=moments");
  CHECK(ini.sections["mc"]["n_paths"] == "99");
  CHECK(ini.sections[""]["scenario"] == "moments");
  CHECK_THROWS_AS(ini.set_override("nonsense"), ConfigError);
  CHECK_THROWS_AS(IniFile::parse_string("[unterminated\n"), ConfigError);
  CHECK_THROWS_AS(IniFile::parse_string("key_without_value\n"), ConfigError);
}

TEST_CASE("scenario config: validation catches missing sections and bad values") {
  CHECK_THROWS_WITH_AS(ScenarioConfig::from_ini(IniFile::parse_string("scenario = pattern\n")),
                       doctest::Contains("[output]"), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_ini(IniFile::parse_string("")), ConfigError);
  CHECK_THROWS_AS(
      ScenarioConfig::from_ini(IniFile::parse_string("scenario = warp_drive\n")), ConfigError);
  CHECK_THROWS_WITH_AS(
      ScenarioConfig::from_ini(IniFile::parse_string("scenario = selfcheck\n[mc]\ntypo_key = 1\n")),
      doctest::Contains("typo_key"), ConfigError);
  CHECK_THROWS_AS(ScenarioConfig::from_ini(IniFile::parse_string(
                      "scenario = selfcheck\n[bogus_section]\nx = 1\n")),
                  ConfigError);

  // Negative / zero numerics rejected where applicable.
  const std::string base = kPatternCfg;
  {
    IniFile ini = IniFile::parse_string(base);
    ini.set_override("mc.n_paths=1");
    CHECK_THROWS_AS(ScenarioConfig::from_ini(ini), ConfigError);
  }
  {
    IniFile ini = IniFile::parse_string(base);
    ini.set_override("grid.t_max=-2");
    CHECK_THROWS_AS(ScenarioConfig::from_ini(ini), ConfigError);
  }
  {
    IniFile ini = IniFile::parse_string(base);
    ini.set_override("physics.mass=0");
    CHECK_THROWS_AS(ScenarioConfig::from_ini(ini), ConfigError);
  }
  {
    IniFile ini = IniFile::parse_string(base);
    ini.set_override("mc.sampler=fancy");
    CHECK_THROWS_AS(ScenarioConfig::from_ini(ini), ConfigError);
  }
}

TEST_CASE("scenario config: profile construction from config") {
  IniFile ini = IniFile::parse_string(
      "scenario = classify\n[profile]\ntype = expression\nexpr = exp(-2*t)\n"
      "[output]\ncsv_path = c.csv\n");
  const ScenarioConfig cfg = ScenarioConfig::from_ini(ini);
  const DecoherenceProfile prof = cfg.build_profile();
  CHECK(prof.sigma(1.0) == doctest::Approx(std::exp(-2.0)));

  IniFile bad = IniFile::parse_string(
      "scenario = classify\n[profile]\ntype = expression\n[output]\ncsv_path = c.csv\n");
  CHECK_THROWS_AS(ScenarioConfig::from_ini(bad), ConfigError);
}

TEST_CASE("pattern scenario: summary, CSV shape, byte-identical reruns") {
  write_file("cli_pattern.cfg", kPatternCfg);
  const ScenarioConfig cfg = ScenarioConfig::load("cli_pattern.cfg", {});
  std::ostringstream summary;
  CHECK(run_scenario(cfg, false, summary) == 0);
  CHECK(summary.str().find("pattern: 6 rows") != std::string::npos);

  const std::string first = read_file("cli_pattern.csv");
  CHECK(first.rfind("x,t,intensity_exact,intensity_mc,std_err\n", 0) == 0);

  std::ostringstream quiet_summary;
  CHECK(run_scenario(cfg, true, quiet_summary) == 0);
  CHECK(quiet_summary.str().empty());
  CHECK(read_file("cli_pattern.csv") == first);  // byte-identical rerun

  std::remove("cli_pattern.cfg");
  std::remove("cli_pattern.csv");
}

TEST_CASE("cli binary: pattern run, worked value in CSV, exit codes") {
  write_file("cli_bin_pattern.cfg", kPatternCfg);
  const RunResult r = run_cli("pattern --config cli_bin_pattern.cfg --out cli_bin_pattern.csv "
                              "--paths 20000 --seed 11");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("pattern:") != std::string::npos);

  // Locate the (x=0, t=1) row: intensity_exact column must be the worked
  // value 1.3277..., and the MC column within 5 sigma of it.
  std::istringstream csv(read_file("cli_bin_pattern.csv"));
  std::string line;
  std::getline(csv, line);  // header
  bool found = false;
  while (std::getline(csv, line)) {
    double x, t, exact, mc, se;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &x, &t, &exact, &mc, &se) == 5);
    if (x == 0.0 && t == 1.0) {
      found = true;
      CHECK(exact == doctest::Approx(1.3277).epsilon(2e-4));
      CHECK(std::abs(mc - exact) < 5.0 * se);
    }
  }
  CHECK(found);
  std::remove("cli_bin_pattern.cfg");
  std::remove("cli_bin_pattern.csv");
}

TEST_CASE("cli binary: missing section exits 1 and writes nothing") {
  write_file("cli_broken.cfg", "scenario = pattern\n[output]\ncsv_path = cli_broken.csv\n");
  const RunResult r = run_cli("pattern --config cli_broken.cfg");
  CHECK(r.exit_code == 1);
  std::ifstream produced("cli_broken.csv");
  CHECK_FALSE(produced.good());
  std::remove("cli_broken.cfg");
}

TEST_CASE("cli binary: classify builtins") {
  write_file("cli_classify.cfg",
             "scenario = classify\n[profile]\ntype = builtins\n"
             "[output]\ncsv_path = cli_classify.csv\n");
  const RunResult r = run_cli("classify --config cli_classify.cfg");
  CHECK(r.exit_code == 0);
  const std::string csv = read_file("cli_classify.csv");
  CHECK(csv.rfind("profile,fitted_exponent,regime\n", 0) == 0);
  CHECK(csv.find("markovian(sigma0=1),") != std::string::npos);
  CHECK(csv.find(",Markovian") != std::string::npos);
  CHECK(csv.find(",SubMarkovian") != std::string::npos);
  CHECK(csv.find(",SuperMarkovianI") != std::string::npos);
  CHECK(csv.find(",SuperMarkovianII") != std::string::npos);
  std::remove("cli_classify.cfg");
  std::remove("cli_classify.csv");
}

TEST_CASE("cli binary: entropy with a no-noise profile gives all zeros") {
  write_file("cli_entropy0.cfg",
             "scenario = entropy\n"
             "[profile]\ntype = expression\nexpr = 0\n"
             "[grid]\nt_max = 2\nn_time_samples = 3\n"
             "[mc]\nn_paths = 64\nmaster_seed = 5\n"
             "[physics]\nsigma0 = 1\nmass = 1\nn_p_points = 64\n"
             "[output]\ncsv_path = cli_entropy0.csv\n");
  const RunResult r = run_cli("entropy --config cli_entropy0.cfg");
  CHECK(r.exit_code == 0);
  std::istringstream csv(read_file("cli_entropy0.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "t,lambda,s_lin_oracle,s_lin_closed,s_lin_mc,std_err");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    double t, lam, so, sc, sm, se;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &t, &lam, &so, &sc, &sm, &se) ==
            6);
    CHECK(lam == 0.0);
    CHECK(so == 0.0);
    CHECK(sc == 0.0);
    CHECK(sm < 1e-6);
    CHECK(se < 1e-12);
  }
  CHECK(rows == 3);
  std::remove("cli_entropy0.cfg");
  std::remove("cli_entropy0.csv");
}

TEST_CASE("cli binary: evolve end to end with matrix files") {
  Eigen::VectorXd e(2);
  e << 0.0, 1.0;
  write_hamiltonian("cli_h.txt", e);
  Eigen::MatrixXcd rho0(2, 2);
  rho0 << 0.5, 0.5, 0.5, 0.5;
  write_density_matrix("cli_rho.txt", rho0);
  write_file("cli_evolve.cfg",
             "scenario = evolve\n"
             "[profile]\ntype = markovian\n"
             "[grid]\nt_max = 1.3862943611198906\nn_time_samples = 3\n"  // ln 4
             "[mc]\nn_paths = 4000\nmaster_seed = 3\n"
             "[physics]\nhamiltonian_file = cli_h.txt\ndensity_matrix_file = cli_rho.txt\n"
             "[output]\ncsv_path = cli_evolve.csv\nplot_path = cli_evolve.svg\n");
  const RunResult r = run_cli("evolve --config cli_evolve.cfg");
  CHECK(r.exit_code == 0);
  std::istringstream csv(read_file("cli_evolve.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "t,purity_exact,purity_mc,max_abs_dev,max_std_err");
  double last_purity_exact = 0;
  while (std::getline(csv, line)) {
    double t, pe, pm, dev, se;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &t, &pe, &pm, &dev, &se) == 5);
    last_purity_exact = pe;
  }
  // Final state: diag 1/2 with |coherence| 1/4 -> purity 0.625.
  CHECK(last_purity_exact == doctest::Approx(0.625).epsilon(1e-12));
  const std::string svg = read_file("cli_evolve.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("polyline") != std::string::npos);
  for (const char* f : {"cli_h.txt", "cli_rho.txt", "cli_evolve.cfg", "cli_evolve.csv",
                        "cli_evolve.svg"})
    std::remove(f);
}

TEST_CASE("cli binary: selfcheck passes, is deterministic, and exits 3 under injection") {
  const RunResult a = run_cli("selfcheck --seed 31415");
  CHECK(a.exit_code == 0);
  CHECK(a.output.find("checks passed") != std::string::npos);
  CHECK(a.output.find("[FAIL]") == std::string::npos);

  const RunResult b = run_cli("selfcheck --seed 31415");
  CHECK(b.output == a.output);  // byte-identical

  const RunResult injected = run_cli("selfcheck --seed 31415 --inject moment-constant");
  CHECK(injected.exit_code == 3);
  CHECK(injected.output.find("[FAIL]") != std::string::npos);

  const RunResult unknown = run_cli("selfcheck --inject not_a_knob");
  CHECK(unknown.exit_code == 1);
}

TEST_CASE("cli binary: moments scenario columns") {
  write_file("cli_moments.cfg",
             "scenario = moments\n"
             "[profile]\ntype = markovian\n"
             "[grid]\nt_max = 1\nn_time_samples = 3\n"
             "[mc]\nn_paths = 5000\nmaster_seed = 17\n"
             "[moments]\nn_max = 4\n"
             "[output]\ncsv_path = cli_moments.csv\n");
  const RunResult r = run_cli("moments --config cli_moments.cfg");
  CHECK(r.exit_code == 0);
  std::istringstream csv(read_file("cli_moments.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "n,t,beta_closed,beta_ode,beta_mc,std_err");
  int rows = 0;
  bool beta2_ok = false;
  while (std::getline(csv, line)) {
    ++rows;
    double n, t, closed, ode, mc, se;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &n, &t, &closed, &ode, &mc,
                        &se) == 6);
    CHECK(std::abs(ode - closed) < 1e-5 * std::max(1.0, std::abs(closed)));
    if (n == 2.0 && t == 1.0) {
      beta2_ok = std::abs(mc - 1.0) < 5.0 * se;
      CHECK(closed == 1.0);
    }
  }
  CHECK(rows == 3 * 4);
  CHECK(beta2_ok);
  std::remove("cli_moments.cfg");
  std::remove("cli_moments.csv");
}
