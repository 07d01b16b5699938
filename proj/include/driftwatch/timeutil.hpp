#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

namespace driftwatch {

/// All timestamps are UTC with second resolution.
using Timestamp = std::chrono::sys_seconds;
using Duration = std::chrono::seconds;

/// Parses an ISO-8601 instant ("2020-02-03T10:15:00Z" or with a "+hh:mm" /
/// "-hh:mm" offset, which is normalized to UTC). Fractional seconds are
/// accepted and truncated. Returns nullopt on malformed input.
std::optional<Timestamp> parse_iso8601(const std::string& text);

/// Formats a timestamp as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(Timestamp t);

/// Parses a duration given either as a plain number of seconds ("3600")
/// or with a unit suffix: s, m, h, d, w ("30d"). Returns nullopt on
/// malformed input or non-positive result.
std::optional<Duration> parse_duration(const std::string& text);

}  // namespace driftwatch
