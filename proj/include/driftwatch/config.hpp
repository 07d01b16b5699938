#pragma once

#include <string>

#include <json.hpp>

#include "driftwatch/monitor.hpp"

namespace driftwatch {

/// Parses a monitor config from its JSON document form. Keys: main_model,
/// support_models, predictive_threshold, temporal_threshold, baseline_mode
/// ("previous_window" | "moving_average"), baseline_depth, bin_count,
/// window_duration (seconds or "30d"-style), window_origin (ISO-8601),
/// min_samples, kl_smoothing. Unknown keys are rejected as likely typos.
/// Throws ConfigError; the result has been validated.
MonitorConfig config_from_json(const nlohmann::json& doc);

MonitorConfig load_config_file(const std::string& path);

/// Canonical JSON form of a config: the basis for the snapshot digest, so
/// two files that parse to the same config share one digest.
nlohmann::json config_to_json(const MonitorConfig& config);

/// FNV-1a 64-bit over the canonical JSON dump, as a 16-digit hex string.
std::string config_digest(const MonitorConfig& config);

std::uint64_t fnv1a64(const std::string& data);

}  // namespace driftwatch
