#pragma once

#include "horse_cli/config.hpp"
#include "horse_cli/table.hpp"

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace horse::cli {

inline constexpr const char* artifact_version = "1.0.0";

// Exit statuses of the driver.
enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_numerical = 3, exit_io = 4 };

struct RunReport {
    std::vector<std::filesystem::path> files;
    int failed_points = 0;  // rows written with a non-ok status flag
};

// Calls body(i) for i in [0, n) on up to `threads` workers; results must be stored by index.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

// Computes the table for a validated configuration without touching the filesystem.
// Rows whose computation throws a numerical error carry status != "ok" and NaN values.
Table compute(const RunConfig& config, int threads, int* failed_points = nullptr);

// compute() followed by writing <out_dir>/<config.output>.
RunReport run(const RunConfig& config, const std::filesystem::path& out_dir, int threads);

// Names accepted by --preset: fig1 .. fig8.
std::vector<std::string> preset_names();

// Writes the CSV files of one figure preset into out_dir.
RunReport run_preset(const std::string& name, const std::filesystem::path& out_dir, int threads);

} // namespace horse::cli
