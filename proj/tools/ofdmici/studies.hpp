#pragma once

#include <string>
#include <vector>

#include "scenario.hpp"

namespace ofdmici::cli {

struct RunOptions {
    std::string out_dir;
    int threads = 0; ///< 0 = hardware concurrency
    bool paper_scale = false;
};

/// Executes the scenario's study and writes result tables plus the run
/// manifest into out_dir. Returns the paths written.
std::vector<std::string> run_scenario(const Scenario& scenario, const RunOptions& options);

} // namespace ofdmici::cli
