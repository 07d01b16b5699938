#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace driftwatch {

/// Exit codes shared by the CLI commands: 0 clean, 1 operational error,
/// 2 at least one CRITICAL alert fired during the run.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCritical = 2;

struct ReplayOptions {
    std::string config_path;
    std::string input_csv;
    std::string out_dir;
    std::size_t csv_error_budget = 100;
};

/// Full ingestion and evaluation of a CSV stream. Writes readings.json,
/// alerts.jsonl, report.md, predictive.csv, and temporal.csv to out_dir.
int cmd_replay(const ReplayOptions& options);

struct GenerateOptions {
    std::optional<std::string> spec_path;  // scenario JSON; exclusive with paper_shaped
    bool paper_shaped = false;
    std::optional<std::uint64_t> seed;  // overrides the spec's seed
    std::string out_dir;
};

/// Writes events.csv, the scenario.json actually used, and a matching
/// replay config.json to out_dir. Deterministic per seed.
int cmd_generate(const GenerateOptions& options);

struct ServeOptions {
    std::string config_path;
    std::string listen = "127.0.0.1:8080";
    std::string out_dir = ".";
    std::optional<std::string> snapshot_path;
    bool fresh = false;
};

/// Runs the ingestion HTTP service until SIGINT/SIGTERM, then writes a
/// snapshot (when configured) and exits cleanly.
int cmd_serve(const ServeOptions& options);

}  // namespace driftwatch
