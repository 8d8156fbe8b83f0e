#pragma once

#include <iosfwd>

#include "run_config.hpp"

namespace mvdrift::app {

/// Runs cfg.experiment, writes its CSV files and run_meta.ini into cfg.out
/// (created if missing) and prints a short summary to `log`. Returns false
/// when a validation check fails.
bool run_experiment(const RunConfig& cfg, std::ostream& log);

}  // namespace mvdrift::app
