#pragma once

#include "perchsim/simulation.hpp"

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace perch {

/// Metrics as a single JSON object; empty optionals become null.
nlohmann::json toJson(const Metrics& m);
nlohmann::json toJson(const ComparisonReport& r);

/// log.csv, events.csv and metrics.json under `dir` (created if missing).
void writeRunOutputs(const std::filesystem::path& dir, const RunResult& run);

/// Each ablation variant against the proposed run, with inequality checks.
nlohmann::json ablationReport(const RunResult& proposed, const std::vector<RunResult>& ablations);

}  // namespace perch
