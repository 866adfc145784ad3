#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "dephasim/scenarios.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* opt = cmd->add_option("--config", args.config_path, "scenario config file (INI)");
  if (config_required) opt->required();
  cmd->add_option("--set", args.overrides, "override, section.key=value (repeatable)")
      ->take_all();
  cmd->add_flag("--quiet", args.quiet, "suppress the summary line");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dephasim: phase-damping master equation solved exactly and by Monte Carlo"};
  app.require_subcommand(1);

  const std::vector<std::string> scenario_cmds = {"pattern", "entropy", "evolve", "classify",
                                                  "moments"};
  struct SubState {
    CommonArgs common;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::int64_t paths = 0;
    std::string out_csv, out_plot;
  };
  std::vector<SubState> states(scenario_cmds.size() + 1);

  for (std::size_t i = 0; i < scenario_cmds.size(); ++i) {
    CLI::App* cmd = app.add_subcommand(scenario_cmds[i], "run the " + scenario_cmds[i] +
                                                             " scenario from a config file");
    add_common(cmd, states[i].common, /*config_required=*/true);
    cmd->add_option("--seed", states[i].seed, "override [mc] master_seed")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--paths", states[i].paths, "override [mc] n_paths");
    cmd->add_option("--out", states[i].out_csv, "override [output] csv_path");
    cmd->add_option("--plot", states[i].out_plot, "override [output] plot_path");
  }

  SubState& self_state = states.back();
  std::string inject;
  CLI::App* selfcheck = app.add_subcommand("selfcheck", "run the built-in verification suite");
  add_common(selfcheck, self_state.common, /*config_required=*/false);
  selfcheck->add_option("--seed", self_state.seed, "master seed for the stochastic checks");
  selfcheck->add_option("--inject", inject,
                        "fault injection for testing the harness (moment-constant)");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* picked = app.get_subcommands().front();
    const std::string name = picked->get_name();

    dephasim::ScenarioConfig cfg;
    std::size_t idx = scenario_cmds.size();
    for (std::size_t i = 0; i < scenario_cmds.size(); ++i)
      if (name == scenario_cmds[i]) idx = i;
    SubState& st = states[idx];

    if (name == "selfcheck") {
      std::uint64_t seed = 1;
      std::string cfg_inject = inject;
      if (!st.common.config_path.empty()) {
        cfg = dephasim::ScenarioConfig::load(st.common.config_path, st.common.overrides);
        seed = cfg.mc.master_seed;
        if (cfg_inject.empty()) cfg_inject = cfg.selfcheck_inject;
      }
      if (picked->count("--seed")) seed = st.seed;
      return dephasim::run_selfcheck(seed, cfg_inject, std::cout) ? 0 : 3;
    }

    std::vector<std::string> overrides = st.common.overrides;
    overrides.insert(overrides.begin(), "scenario=" + name);
    if (picked->count("--seed")) overrides.push_back("mc.master_seed=" + std::to_string(st.seed));
    if (picked->count("--paths")) overrides.push_back("mc.n_paths=" + std::to_string(st.paths));
    if (!st.out_csv.empty()) overrides.push_back("output.csv_path=" + st.out_csv);
    if (!st.out_plot.empty()) overrides.push_back("output.plot_path=" + st.out_plot);

    cfg = dephasim::ScenarioConfig::load(st.common.config_path, overrides);
    return dephasim::run_scenario(cfg, st.common.quiet, std::cout);
  } catch (const dephasim::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const dephasim::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  }
}
