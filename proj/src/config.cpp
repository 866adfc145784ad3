#include "dephasim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "dephasim/errors.hpp"

namespace dephasim {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double to_double(const std::string& section, const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end != value.c_str() + value.size() || value.empty())
    throw ConfigError("config: [" + section + "] " + key + " = '" + value + "' is not a number");
  return v;
}

std::int64_t to_int(const std::string& section, const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long long v = std::strtoll(value.c_str(), &end, 10);
  if (end != value.c_str() + value.size() || value.empty())
    throw ConfigError("config: [" + section + "] " + key + " = '" + value + "' is not an integer");
  return v;
}

std::uint64_t to_uint(const std::string& section, const std::string& key,
                      const std::string& value) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end != value.c_str() + value.size() || value.empty() || value[0] == '-')
    throw ConfigError("config: [" + section + "] " + key + " = '" + value +
                      "' is not an unsigned integer");
  return v;
}

}  // namespace

IniFile IniFile::parse_string(const std::string& text, const std::string& origin) {
  IniFile ini;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      ini.sections[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
    ini.sections[section][key] = value;
  }
  return ini;
}

IniFile IniFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str(), path);
}

bool IniFile::has(const std::string& section, const std::string& key) const {
  const auto s = sections.find(section);
  return s != sections.end() && s->second.count(key) > 0;
}

void IniFile::set_override(const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override '" + assignment + "': expected section.key=value");
  std::string lhs = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  const std::size_t dot = lhs.find('.');
  std::string section, key;
  if (dot == std::string::npos) {
    key = lhs;
  } else {
    section = lhs.substr(0, dot);
    key = lhs.substr(dot + 1);
  }
  if (key.empty()) throw ConfigError("override '" + assignment + "': empty key");
  sections[section][key] = value;
}

const char* scenario_name(ScenarioType s) {
  switch (s) {
    case ScenarioType::Pattern:
      return "pattern";
    case ScenarioType::Entropy:
      return "entropy";
    case ScenarioType::Evolve:
      return "evolve";
    case ScenarioType::Classify:
      return "classify";
    case ScenarioType::Moments:
      return "moments";
    case ScenarioType::Selfcheck:
      return "selfcheck";
  }
  return "?";
}

namespace {

ScenarioType parse_scenario(const std::string& name) {
  if (name == "pattern") return ScenarioType::Pattern;
  if (name == "entropy") return ScenarioType::Entropy;
  if (name == "evolve") return ScenarioType::Evolve;
  if (name == "classify") return ScenarioType::Classify;
  if (name == "moments") return ScenarioType::Moments;
  if (name == "selfcheck") return ScenarioType::Selfcheck;
  throw ConfigError("config: unknown scenario '" + name + "'");
}

// Known keys per section, to catch typos early.
const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"", {"scenario"}},
      {"profile", {"type", "sigma0", "gamma", "expr"}},
      {"grid", {"t_max", "n_time_samples", "x_min", "x_max", "n_x_samples"}},
      {"mc", {"n_paths", "master_seed", "n_steps_per_unit_time", "sampler"}},
      {"physics",
       {"k1", "k2", "mass", "sigma0", "p_max", "n_p_points", "hamiltonian_file",
        "density_matrix_file"}},
      {"output", {"csv_path", "plot_path"}},
      {"classify", {"horizon", "window"}},
      {"moments", {"n_max"}},
      {"selfcheck", {"inject"}},
  };
  return keys;
}

void require_section(const IniFile& ini, const std::string& section, ScenarioType scenario) {
  if (!ini.sections.count(section))
    throw ConfigError(std::string("config: scenario '") + scenario_name(scenario) +
                      "' requires section [" + section + "]");
}

void require_key(const IniFile& ini, const std::string& section, const std::string& key,
                 ScenarioType scenario) {
  require_section(ini, section, scenario);
  if (!ini.has(section, key))
    throw ConfigError(std::string("config: scenario '") + scenario_name(scenario) +
                      "' requires [" + section + "] " + key);
}

}  // namespace

ScenarioConfig ScenarioConfig::from_ini(IniFile ini) {
  for (const auto& [section, kv] : ini.sections) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) throw ConfigError("config: unknown section [" + section + "]");
    for (const auto& [key, value] : kv) {
      (void)value;
      if (!it->second.count(key))
        throw ConfigError("config: unknown key '" + key + "' in section [" + section + "]");
    }
  }

  if (!ini.has("", "scenario")) throw ConfigError("config: missing top-level 'scenario' key");
  ScenarioConfig cfg;
  cfg.scenario = parse_scenario(ini.sections[""]["scenario"]);

  auto get = [&](const std::string& sec, const std::string& key) -> const std::string& {
    return ini.sections[sec][key];
  };
  auto getd = [&](const std::string& sec, const std::string& key, double dflt) {
    return ini.has(sec, key) ? to_double(sec, key, get(sec, key)) : dflt;
  };
  auto geti = [&](const std::string& sec, const std::string& key, std::int64_t dflt) {
    return ini.has(sec, key) ? to_int(sec, key, get(sec, key)) : dflt;
  };

  if (ini.sections.count("profile")) {
    if (ini.has("profile", "type")) cfg.profile.type = get("profile", "type");
    cfg.profile.sigma0 = getd("profile", "sigma0", cfg.profile.sigma0);
    cfg.profile.gamma = getd("profile", "gamma", cfg.profile.gamma);
    if (ini.has("profile", "expr")) cfg.profile.expr = get("profile", "expr");
  }
  cfg.grid.t_max = getd("grid", "t_max", cfg.grid.t_max);
  cfg.grid.n_time_samples = geti("grid", "n_time_samples", cfg.grid.n_time_samples);
  cfg.grid.x_min = getd("grid", "x_min", cfg.grid.x_min);
  cfg.grid.x_max = getd("grid", "x_max", cfg.grid.x_max);
  cfg.grid.n_x_samples = geti("grid", "n_x_samples", cfg.grid.n_x_samples);

  cfg.mc.n_paths = geti("mc", "n_paths", cfg.mc.n_paths);
  if (ini.has("mc", "master_seed"))
    cfg.mc.master_seed = to_uint("mc", "master_seed", get("mc", "master_seed"));
  cfg.mc.n_steps_per_unit_time =
      geti("mc", "n_steps_per_unit_time", cfg.mc.n_steps_per_unit_time);
  if (ini.has("mc", "sampler")) cfg.mc.sampler = get("mc", "sampler");

  cfg.physics.k1 = getd("physics", "k1", cfg.physics.k1);
  cfg.physics.k2 = getd("physics", "k2", cfg.physics.k2);
  cfg.physics.mass = getd("physics", "mass", cfg.physics.mass);
  cfg.physics.sigma0 = getd("physics", "sigma0", cfg.physics.sigma0);
  cfg.physics.p_max = getd("physics", "p_max", cfg.physics.p_max);
  cfg.physics.n_p_points = geti("physics", "n_p_points", cfg.physics.n_p_points);
  if (ini.has("physics", "hamiltonian_file"))
    cfg.physics.hamiltonian_file = get("physics", "hamiltonian_file");
  if (ini.has("physics", "density_matrix_file"))
    cfg.physics.density_matrix_file = get("physics", "density_matrix_file");

  if (ini.sections.count("output")) {
    if (ini.has("output", "csv_path")) cfg.output.csv_path = get("output", "csv_path");
    if (ini.has("output", "plot_path")) cfg.output.plot_path = get("output", "plot_path");
  }
  cfg.classify.horizon = getd("classify", "horizon", cfg.classify.horizon);
  cfg.classify.window = getd("classify", "window", cfg.classify.window);
  cfg.moments.n_max = static_cast<int>(geti("moments", "n_max", cfg.moments.n_max));
  if (ini.has("selfcheck", "inject")) cfg.selfcheck_inject = get("selfcheck", "inject");

  // --- validation ---------------------------------------------------------
  const ScenarioType sc = cfg.scenario;
  auto positive = [&](double v, const std::string& what) {
    if (!(v > 0)) throw ConfigError("config: " + what + " must be positive");
  };

  static const std::set<std::string> profile_types = {"markovian", "submarkovian", "super1",
                                                      "super2",    "expression",   "builtins"};
  if (!profile_types.count(cfg.profile.type))
    throw ConfigError("config: unknown profile type '" + cfg.profile.type + "'");
  if (cfg.profile.type == "expression" && cfg.profile.expr.empty())
    throw ConfigError("config: profile type 'expression' requires [profile] expr");
  if (cfg.profile.type == "builtins" && sc != ScenarioType::Classify)
    throw ConfigError("config: profile type 'builtins' is only valid for classify");
  if (cfg.mc.sampler != "direct" && cfg.mc.sampler != "pathwise")
    throw ConfigError("config: [mc] sampler must be 'direct' or 'pathwise'");

  if (sc != ScenarioType::Selfcheck) {
    require_key(ini, "output", "csv_path", sc);
    require_section(ini, "profile", sc);
  }
  switch (sc) {
    case ScenarioType::Pattern:
      require_section(ini, "grid", sc);
      require_section(ini, "mc", sc);
      require_key(ini, "physics", "k1", sc);
      require_key(ini, "physics", "k2", sc);
      require_key(ini, "physics", "mass", sc);
      positive(cfg.grid.t_max, "[grid] t_max");
      if (cfg.grid.n_time_samples < 1 || cfg.grid.n_x_samples < 1)
        throw ConfigError("config: grid sample counts must be >= 1");
      if (!(cfg.grid.x_max > cfg.grid.x_min))
        throw ConfigError("config: [grid] x_max must exceed x_min");
      positive(cfg.physics.mass, "[physics] mass");
      break;
    case ScenarioType::Entropy:
      require_section(ini, "grid", sc);
      require_section(ini, "mc", sc);
      require_key(ini, "physics", "sigma0", sc);
      require_key(ini, "physics", "mass", sc);
      positive(cfg.grid.t_max, "[grid] t_max");
      if (cfg.grid.n_time_samples < 2)
        throw ConfigError("config: entropy needs [grid] n_time_samples >= 2");
      positive(cfg.physics.sigma0, "[physics] sigma0");
      positive(cfg.physics.mass, "[physics] mass");
      if (cfg.physics.n_p_points < 8) throw ConfigError("config: [physics] n_p_points too small");
      break;
    case ScenarioType::Evolve:
      require_section(ini, "grid", sc);
      require_section(ini, "mc", sc);
      require_key(ini, "physics", "hamiltonian_file", sc);
      require_key(ini, "physics", "density_matrix_file", sc);
      positive(cfg.grid.t_max, "[grid] t_max");
      if (cfg.grid.n_time_samples < 1)
        throw ConfigError("config: grid sample counts must be >= 1");
      break;
    case ScenarioType::Classify:
      positive(cfg.classify.horizon, "[classify] horizon");
      if (!(cfg.classify.window > 0) || !(cfg.classify.window < 1))
        throw ConfigError("config: [classify] window must lie in (0, 1)");
      break;
    case ScenarioType::Moments:
      require_section(ini, "grid", sc);
      require_section(ini, "mc", sc);
      positive(cfg.grid.t_max, "[grid] t_max");
      if (cfg.grid.n_time_samples < 2)
        throw ConfigError("config: moments needs [grid] n_time_samples >= 2");
      if (cfg.moments.n_max < 2) throw ConfigError("config: [moments] n_max must be >= 2");
      break;
    case ScenarioType::Selfcheck:
      break;
  }
  if (sc == ScenarioType::Pattern || sc == ScenarioType::Entropy || sc == ScenarioType::Evolve ||
      sc == ScenarioType::Moments) {
    if (cfg.mc.n_paths < 2) throw ConfigError("config: [mc] n_paths must be >= 2");
    if (cfg.mc.n_steps_per_unit_time < 1)
      throw ConfigError("config: [mc] n_steps_per_unit_time must be >= 1");
  }
  return cfg;
}

ScenarioConfig ScenarioConfig::load(const std::string& path,
                                    const std::vector<std::string>& overrides) {
  IniFile ini = IniFile::parse_file(path);
  for (const std::string& o : overrides) ini.set_override(o);
  return from_ini(std::move(ini));
}

DecoherenceProfile ScenarioConfig::build_profile() const {
  if (profile.type == "markovian") return markovian_profile(profile.sigma0);
  if (profile.type == "submarkovian") return submarkovian_profile(profile.sigma0, profile.gamma);
  if (profile.type == "super1") return super1_profile(profile.sigma0);
  if (profile.type == "super2") return super2_profile(profile.sigma0);
  if (profile.type == "expression") return profile_from_expression(profile.expr);
  throw ConfigError("config: profile type '" + profile.type + "' does not name a single profile");
}

McOptions ScenarioConfig::mc_options() const {
  McOptions opts;
  opts.sampler =
      mc.sampler == "pathwise" ? PhaseSampler::PathwiseIto : PhaseSampler::DirectGaussian;
  opts.steps_per_unit_time = mc.n_steps_per_unit_time;
  return opts;
}

}  // namespace dephasim
