#pragma once

#include <string>

#include "driftwatch/engine.hpp"

namespace driftwatch {

/// Snapshot files are JSON with a magic header, format version, the config
/// digest of the engine that wrote them, and an FNV-1a checksum over the
/// serialized state. Restore refuses version mismatches, checksum failures,
/// and configs whose digest differs from the recorded one.
inline const std::string kSnapshotMagic = "driftwatch.snapshot";
inline constexpr int kSnapshotVersion = 1;

void write_snapshot_file(const std::string& path, const MonitorEngine& engine);

MonitorEngine read_snapshot_file(const std::string& path, const MonitorConfig& config);

}  // namespace driftwatch
