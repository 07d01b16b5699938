#pragma once

#include <string>

#include "driftwatch/timeutil.hpp"

namespace driftwatch {

/// One model's prediction score for one study. The atomic ingestion unit;
/// (study_id, model_id, class_label) identifies an event uniquely within
/// a stream, later duplicates are dropped.
struct PredictionEvent {
    std::string study_id;
    Timestamp timestamp;
    std::string model_id;
    std::string class_label;
    double score = 0.0;  // in [0, 1]

    bool operator==(const PredictionEvent&) const = default;
};

}  // namespace driftwatch
