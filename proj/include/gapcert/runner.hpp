#pragma once

#include <nlohmann/json.hpp>
#include <vector>

#include "gapcert/runconfig.hpp"

namespace gapcert {

struct RunResult {
  nlohmann::json record;                 // the full run record
  std::vector<nlohmann::json> csv_rows;  // flat rows (sweep / validate)
};

/// Executes one parsed configuration. Deterministic for identical configs;
/// throws Error on failure (exit code via exit_code_for).
RunResult run_config(const RunConfig& cfg);

} // namespace gapcert
