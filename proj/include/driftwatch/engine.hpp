#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "driftwatch/event.hpp"
#include "driftwatch/monitor.hpp"

namespace driftwatch {

/// What happened to one ingested event. Exactly one counter moves per
/// event, so accepted + duplicates + late + pre_epoch + unregistered +
/// out_of_domain always equals the number of events offered.
enum class IngestOutcome {
    Accepted,
    Duplicate,
    Late,
    PreEpoch,
    UnregisteredModel,
    OutOfDomain,
};

std::string to_string(IngestOutcome outcome);

struct Diagnostics {
    std::uint64_t accepted = 0;
    std::uint64_t duplicates = 0;
    std::uint64_t late_events = 0;
    std::uint64_t pre_epoch = 0;
    std::uint64_t unregistered_model = 0;
    std::uint64_t out_of_domain = 0;

    std::uint64_t total() const {
        return accepted + duplicates + late_events + pre_epoch + unregistered_model +
               out_of_domain;
    }
    bool operator==(const Diagnostics&) const = default;
};

/// One closed, evaluated window for one class label: the evaluation plus
/// per-model accepted counts for coverage reporting.
struct EvaluationRecord {
    std::string class_label;
    WindowEvaluation evaluation;
    std::map<std::string, std::uint64_t> model_counts;
    std::map<std::string, std::uint64_t> insufficient;
};

/// Snapshot of an open (still accumulating) window, for /v1/status.
struct OpenWindowStatus {
    std::string class_label;
    TimeWindow window;
    std::map<std::string, std::uint64_t> model_counts;
};

/// Single-monitor ingestion state machine. Routes events into per-label,
/// per-window accumulators; closing a window (triggered by the first event
/// of a later window, or by finalize) runs the divergence evaluation and
/// extends each model's history. One logical writer: callers must apply
/// events in a single total order (the service serializes through a queue).
class MonitorEngine {
public:
    explicit MonitorEngine(MonitorConfig config);

    /// Applies one event. Never throws on bad events; the outcome says
    /// whether it was accepted or why it was dropped.
    IngestOutcome ingest(const PredictionEvent& event);

    /// Closes and evaluates every open window. Used at the end of a replay
    /// so the final window's readings are emitted.
    void finalize();

    const MonitorConfig& config() const { return config_; }
    const Diagnostics& diagnostics() const { return diagnostics_; }

    /// Closed-window evaluations in close order.
    const std::vector<EvaluationRecord>& evaluations() const { return evaluations_; }

    std::vector<OpenWindowStatus> open_windows() const;

    std::uint64_t total_alerts() const;
    bool has_critical_alert() const;

    /// First-seen predictive reading per (label, pair): the reference
    /// baseline that reports show deltas against.
    const std::map<std::string, double>& predictive_baseline() const {
        return predictive_baseline_;
    }

    std::uint64_t alert_log_offset() const { return alert_log_offset_; }
    void set_alert_log_offset(std::uint64_t offset) { alert_log_offset_ = offset; }

    /// Engine state as JSON (no file envelope; see snapshot.hpp). Restoring
    /// from it and replaying the residual stream is exactly equivalent to
    /// uninterrupted processing.
    nlohmann::json state_to_json() const;
    static MonitorEngine state_from_json(const nlohmann::json& state, MonitorConfig config);

private:
    struct LabelState {
        std::optional<WindowAccumulator> open;
        std::int64_t watermark = -1;  // highest closed window index
        std::map<std::string, std::vector<ScoreDistribution>> histories;
    };

    void close_and_evaluate(const std::string& label, LabelState& state);

    MonitorConfig config_;
    std::map<std::string, LabelState> labels_;
    std::set<std::string> seen_keys_;
    Diagnostics diagnostics_;
    std::vector<EvaluationRecord> evaluations_;
    std::map<std::string, double> predictive_baseline_;
    std::uint64_t alert_log_offset_ = 0;
};

}  // namespace driftwatch
