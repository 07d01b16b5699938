#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "driftwatch/event.hpp"

namespace driftwatch {

/// Canonical replay format: header `study_id,timestamp,model_id,class_label,score`,
/// ISO-8601 UTC timestamps, scores in [0, 1], UTF-8, no quoting.
inline const std::string kCsvHeader = "study_id,timestamp,model_id,class_label,score";

struct CsvRowError {
    std::size_t line;  // 1-based physical line number (header is line 1)
    std::string message;
};

struct CsvParseResult {
    std::vector<PredictionEvent> events;
    std::vector<CsvRowError> errors;
};

/// Parses the canonical event CSV. Invalid rows produce positioned errors
/// without aborting the stream, until more than `error_budget` rows have
/// failed, at which point the whole stream is rejected with CsvError.
/// A missing or wrong header is also a CsvError.
CsvParseResult parse_event_csv(std::istream& stream, std::size_t error_budget = 100);

/// Writes events in the canonical CSV format (deterministic: fixed score
/// precision, one row per event in input order).
void write_event_csv(std::ostream& stream, const std::vector<PredictionEvent>& events);

}  // namespace driftwatch
