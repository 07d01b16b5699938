#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "driftwatch/engine.hpp"

namespace driftwatch {

/// Tabular view of an engine's readings: per class label, a windows-by-pairs
/// predictive matrix and a windows-by-models temporal matrix. Every cell
/// traces to exactly one DivergenceReading.
struct ReportBundle {
    struct LabelSection {
        std::string class_label;
        std::vector<std::string> window_labels;  // close order
        std::vector<std::string> pair_keys;      // column order, config order
        std::vector<std::string> model_ids;
        // window label -> series -> value
        std::map<std::string, std::map<std::string, double>> predictive;
        std::map<std::string, std::map<std::string, double>> temporal;
        std::map<std::string, std::map<std::string, std::uint64_t>> counts;
        std::map<std::string, double> baseline;  // pair -> reference-window value
    };

    std::vector<LabelSection> sections;
    std::vector<std::pair<std::string, Alert>> alerts;  // (class label, alert)
    std::vector<std::string> coverage_notes;
    Diagnostics diagnostics;
};

ReportBundle build_report(const MonitorEngine& engine);

/// Display form of one reading: window label, metric, operands, value at
/// full precision.
nlohmann::json reading_to_display_json(const DivergenceReading& reading,
                                       const std::string& class_label);

/// Display form of one alert: window_label, metric, pairs or model, value
/// rounded to 6 decimals, threshold, suspect, severity, ISO timestamp.
nlohmann::json alert_to_display_json(const Alert& alert, const std::string& class_label);

/// Machine outputs. readings.json is deterministic: replaying the same
/// stream yields byte-identical bytes.
void write_readings_json(std::ostream& out, const MonitorEngine& engine);
void write_alerts_jsonl(std::ostream& out, const MonitorEngine& engine);

/// Human tables at 3 decimals, with per-pair deltas against the
/// reference-window baseline.
void write_report_md(std::ostream& out, const MonitorEngine& engine);

/// Plot-ready long format: window,series,value with 9-decimal values.
void write_predictive_csv(std::ostream& out, const ReportBundle& bundle);
void write_temporal_csv(std::ostream& out, const ReportBundle& bundle);

}  // namespace driftwatch
