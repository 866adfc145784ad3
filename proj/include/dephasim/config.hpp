#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dephasim/profiles.hpp"
#include "dephasim/stochastic.hpp"

namespace dephasim {

/// Minimal INI reader: `key = value` lines, `[section]` headers, `#` or `;`
/// comments. Keys before the first section header live in the "" section.
struct IniFile {
  std::map<std::string, std::map<std::string, std::string>> sections;

  static IniFile parse_file(const std::string& path);
  static IniFile parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& section, const std::string& key) const;
  /// Applies "section.key=value" (or "key=value" for the top level).
  void set_override(const std::string& assignment);
};

enum class ScenarioType { Pattern, Entropy, Evolve, Classify, Moments, Selfcheck };

const char* scenario_name(ScenarioType s);

struct ProfileConfig {
  std::string type = "markovian";  // markovian|submarkovian|super1|super2|expression|builtins
  double sigma0 = 1.0;
  double gamma = 1.0;
  std::string expr;
};

struct GridConfig {
  double t_max = 1.0;
  std::int64_t n_time_samples = 10;
  double x_min = 0.0;
  double x_max = 6.283185307179586;
  std::int64_t n_x_samples = 10;
};

struct McConfig {
  std::int64_t n_paths = 10000;
  std::uint64_t master_seed = 1;
  std::int64_t n_steps_per_unit_time = 1000;
  std::string sampler = "direct";  // direct|pathwise
};

struct PhysicsConfig {
  // pattern
  double k1 = 1.0, k2 = 0.0, mass = 1.0;
  // entropy
  double sigma0 = 1.0;
  double p_max = 0.0;  // 0 => 8 momentum sigmas
  std::int64_t n_p_points = 256;
  // evolve
  std::string hamiltonian_file;
  std::string density_matrix_file;
};

struct OutputConfig {
  std::string csv_path;
  std::string plot_path;  // optional
};

struct ClassifyConfig {
  double horizon = 1e3;
  double window = 0.5;
};

struct MomentsConfig {
  int n_max = 6;
};

struct ScenarioConfig {
  ScenarioType scenario = ScenarioType::Selfcheck;
  ProfileConfig profile;
  GridConfig grid;
  McConfig mc;
  PhysicsConfig physics;
  OutputConfig output;
  ClassifyConfig classify;
  MomentsConfig moments;
  std::string selfcheck_inject;  // fault injection hook for testing selfcheck

  /// Parses, applies overrides, validates. Throws ConfigError on any problem.
  static ScenarioConfig load(const std::string& path, const std::vector<std::string>& overrides);
  static ScenarioConfig from_ini(IniFile ini);

  /// The profile named by [profile] (not valid for type "builtins").
  DecoherenceProfile build_profile() const;
  McOptions mc_options() const;
};

}  // namespace dephasim
