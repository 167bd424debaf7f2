#pragma once

#include <string>

#include "wavelab/scenario.hpp"

namespace wavelab {

// Executes a scenario (one run, or a sweep when the config has a sweep
// block), writing CSV artifacts and the manifest under out_dir. Returns a
// process exit status: 0 on success, 2 on a monitor trip, 1 on errors.
int run_scenario(const ScenarioConfig& config, const std::string& out_dir);
int run_sweep(const ScenarioConfig& config, const std::string& out_dir);

// Quick invariant self-test battery; prints one PASS/FAIL line per check and
// returns the number of failures.
int run_check();

}  // namespace wavelab
