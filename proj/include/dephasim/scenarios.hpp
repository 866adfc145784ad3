#pragma once

#include <iosfwd>

#include "dephasim/config.hpp"

namespace dephasim {

/// Executes the configured scenario, writing CSV (and SVG when requested).
/// Prints a one-line summary to `summary` unless quiet. Exit codes:
/// 0 success, 1 configuration error, 2 numerical error, 3 self-check failure
/// (errors are reported by the caller; this function throws instead).
int run_scenario(const ScenarioConfig& config, bool quiet, std::ostream& summary);

/// Runs the built-in check suite, printing one line per check plus a summary
/// to `report`. Returns true iff every check passed. `inject` is a fault
/// injection hook ("" or "moment-constant") used to test the harness itself.
bool run_selfcheck(std::uint64_t master_seed, const std::string& inject, std::ostream& report);

}  // namespace dephasim
