#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "driftwatch/divergence.hpp"
#include "driftwatch/windowing.hpp"

namespace driftwatch {

/// model_b of a temporal reading: the comparison target is the model's own
/// historical baseline, not another model.
inline const std::string kBaseline = "BASELINE";

/// attribute_suspect verdict when no single model explains the exceedances.
inline const std::string kInconclusive = "INCONCLUSIVE";

enum class MetricKind { Predictive, Temporal };

enum class Severity { Warn, Critical };

std::string to_string(MetricKind kind);
std::string to_string(Severity severity);

/// Full monitor configuration: the main model under watch, its support
/// models, thresholds, and the windowing/binning/baseline knobs.
struct MonitorConfig {
    std::string main_model;
    std::vector<std::string> support_models;
    double predictive_threshold = 0.20;
    double temporal_threshold = 0.10;
    BaselineSpec baseline;
    BinningSpec binning;
    WindowSpec window;
    std::optional<double> kl_smoothing;

    /// Throws ConfigError on duplicate ids, main listed as support,
    /// thresholds outside (0, 1], or invalid sub-specs.
    void validate() const;

    /// All monitored model ids, main first, supports in config order.
    std::vector<std::string> all_models() const;

    bool is_registered(const std::string& model_id) const;
};

/// One computed divergence with its operand identities and window.
struct DivergenceReading {
    MetricKind metric = MetricKind::Predictive;
    std::string model_a;
    std::string model_b;  // kBaseline for temporal readings
    TimeWindow window;
    DivergenceValue value;

    std::string pair_key() const { return model_a + "-" + model_b; }
};

/// A threshold crossing. Every bundled reading strictly exceeds the stated
/// threshold; severity is CRITICAL when the worst value reaches twice it.
struct Alert {
    TimeWindow window;
    MetricKind metric = MetricKind::Predictive;
    std::vector<DivergenceReading> readings;
    std::string suspect;  // model id or kInconclusive
    double threshold = 0.0;
    Severity severity = Severity::Warn;
    Timestamp emitted_at{};  // window close time; keeps replays deterministic
};

/// Pairwise JS readings among main and support models for one window.
struct PredictiveResult {
    std::vector<DivergenceReading> readings;
    std::vector<std::string> skipped_pairs;  // coverage notes for absent members
};

/// Computes one JS reading per unordered model pair (main-support and
/// support-support alike). Pairs with an absent member are skipped and
/// listed. Throws Error when the main model itself is absent.
PredictiveResult predictive_divergence(const std::map<std::string, ScoreDistribution>& dists,
                                       const MonitorConfig& config);

/// JS between a model's current distribution and the moving average of its
/// history. Returns nullopt on empty history (bootstrap window).
std::optional<DivergenceReading> temporal_stability(const std::string& model,
                                                    const ScoreDistribution& current,
                                                    const std::vector<ScoreDistribution>& history,
                                                    const MonitorConfig& config);

/// Unique-common-member rule: the suspect is the single model present in
/// every exceeding pair while every pair without it stays at or below the
/// threshold; otherwise INCONCLUSIVE. Throws Error on empty input.
std::string attribute_suspect(const std::vector<DivergenceReading>& readings, double threshold);

Severity severity_for(double value, double threshold);

/// Bundles the offending predictive readings into one alert, or nullopt if
/// nothing exceeds the threshold. Attribution runs over all readings.
std::optional<Alert> build_predictive_alert(const std::vector<DivergenceReading>& readings,
                                            double threshold);

/// Wraps one offending temporal reading into an alert, or nullopt.
std::optional<Alert> build_temporal_alert(const DivergenceReading& reading, double threshold);

/// Everything evaluate_window produces for one closed window. Readings are
/// always present for reporting even when no alert fires.
struct WindowEvaluation {
    TimeWindow window;
    std::vector<DivergenceReading> readings;
    std::vector<Alert> alerts;
    std::vector<std::string> coverage_notes;
};

/// Evaluates one closed window: all predictive pair readings, one temporal
/// reading per model with history, and at most one PREDICTIVE alert plus
/// one TEMPORAL alert per offending model. Pure in its inputs; evaluating
/// the same window twice yields identical output. INSUFFICIENT models are
/// reported as coverage notes, never alerts. The caller extends each
/// model's history with its current distribution afterwards.
WindowEvaluation evaluate_window(
    const WindowCloseResult& closed,
    const std::map<std::string, std::vector<ScoreDistribution>>& histories,
    const MonitorConfig& config);

}  // namespace driftwatch
