#include "driftwatch/monitor.hpp"

#include <algorithm>
#include <set>

namespace driftwatch {

std::string to_string(MetricKind kind) {
    return kind == MetricKind::Predictive ? "PREDICTIVE" : "TEMPORAL";
}

std::string to_string(Severity severity) {
    return severity == Severity::Critical ? "CRITICAL" : "WARN";
}

void MonitorConfig::validate() const {
    if (main_model.empty()) {
        throw ConfigError("main_model must be set");
    }
    if (support_models.empty()) {
        throw ConfigError("at least one support model is required");
    }
    std::set<std::string> seen{main_model};
    for (const auto& m : support_models) {
        if (m == main_model) {
            throw ConfigError("main model '" + m + "' must not appear among support models");
        }
        if (!seen.insert(m).second) {
            throw ConfigError("duplicate model id '" + m + "'");
        }
    }
    if (!(predictive_threshold > 0.0) || predictive_threshold > 1.0) {
        throw ConfigError("predictive_threshold must lie in (0, 1]");
    }
    if (!(temporal_threshold > 0.0) || temporal_threshold > 1.0) {
        throw ConfigError("temporal_threshold must lie in (0, 1]");
    }
    if (kl_smoothing && *kl_smoothing < 0.0) {
        throw ConfigError("kl_smoothing must be non-negative");
    }
    baseline.validate();
    binning.validate();
    window.validate();
}

std::vector<std::string> MonitorConfig::all_models() const {
    std::vector<std::string> models;
    models.reserve(support_models.size() + 1);
    models.push_back(main_model);
    models.insert(models.end(), support_models.begin(), support_models.end());
    return models;
}

bool MonitorConfig::is_registered(const std::string& model_id) const {
    if (model_id == main_model) return true;
    return std::find(support_models.begin(), support_models.end(), model_id) !=
           support_models.end();
}

PredictiveResult predictive_divergence(const std::map<std::string, ScoreDistribution>& dists,
                                       const MonitorConfig& config) {
    if (dists.find(config.main_model) == dists.end()) {
        throw Error("main model absent: '" + config.main_model +
                    "' has no distribution in this window");
    }

    PredictiveResult result;
    std::vector<std::string> models = config.all_models();
    for (std::size_t i = 0; i < models.size(); ++i) {
        for (std::size_t j = i + 1; j < models.size(); ++j) {
            auto a = dists.find(models[i]);
            auto b = dists.find(models[j]);
            if (a == dists.end() || b == dists.end()) {
                result.skipped_pairs.push_back(models[i] + "-" + models[j]);
                continue;
            }
            DivergenceReading reading;
            reading.metric = MetricKind::Predictive;
            reading.model_a = models[i];
            reading.model_b = models[j];
            reading.value = js_divergence(a->second, b->second);
            result.readings.push_back(std::move(reading));
        }
    }
    return result;
}

std::optional<DivergenceReading> temporal_stability(const std::string& model,
                                                    const ScoreDistribution& current,
                                                    const std::vector<ScoreDistribution>& history,
                                                    const MonitorConfig& config) {
    if (history.empty()) return std::nullopt;  // bootstrap window, nothing to compare yet
    ScoreDistribution baseline = moving_average(history, config.baseline.effective_depth());
    DivergenceReading reading;
    reading.metric = MetricKind::Temporal;
    reading.model_a = model;
    reading.model_b = kBaseline;
    reading.value = js_divergence(current, baseline);
    return reading;
}

std::string attribute_suspect(const std::vector<DivergenceReading>& readings, double threshold) {
    if (readings.empty()) {
        throw Error("nothing to attribute: no predictive readings supplied");
    }

    std::vector<const DivergenceReading*> exceeding;
    std::set<std::string> models;
    for (const auto& r : readings) {
        models.insert(r.model_a);
        models.insert(r.model_b);
        if (r.value.value > threshold) exceeding.push_back(&r);
    }
    if (exceeding.empty()) return kInconclusive;

    std::string suspect;
    for (const auto& m : models) {
        bool in_every_exceeding = std::all_of(
            exceeding.begin(), exceeding.end(),
            [&](const DivergenceReading* r) { return r->model_a == m || r->model_b == m; });
        if (!in_every_exceeding) continue;
        bool others_clear = std::all_of(
            readings.begin(), readings.end(), [&](const DivergenceReading& r) {
                bool contains_m = r.model_a == m || r.model_b == m;
                return contains_m || r.value.value <= threshold;
            });
        if (!others_clear) continue;
        if (!suspect.empty()) return kInconclusive;  // not unique
        suspect = m;
    }
    return suspect.empty() ? kInconclusive : suspect;
}

Severity severity_for(double value, double threshold) {
    return value >= 2.0 * threshold ? Severity::Critical : Severity::Warn;
}

std::optional<Alert> build_predictive_alert(const std::vector<DivergenceReading>& readings,
                                            double threshold) {
    std::vector<DivergenceReading> offending;
    for (const auto& r : readings) {
        if (r.value.value > threshold) offending.push_back(r);
    }
    if (offending.empty()) return std::nullopt;

    Alert alert;
    alert.window = offending.front().window;
    alert.metric = MetricKind::Predictive;
    alert.suspect = attribute_suspect(readings, threshold);
    alert.threshold = threshold;
    double worst = 0.0;
    for (const auto& r : offending) worst = std::max(worst, r.value.value);
    alert.severity = severity_for(worst, threshold);
    alert.readings = std::move(offending);
    alert.emitted_at = alert.window.end;
    return alert;
}

std::optional<Alert> build_temporal_alert(const DivergenceReading& reading, double threshold) {
    if (!(reading.value.value > threshold)) return std::nullopt;
    Alert alert;
    alert.window = reading.window;
    alert.metric = MetricKind::Temporal;
    alert.readings = {reading};
    alert.suspect = reading.model_a;
    alert.threshold = threshold;
    alert.severity = severity_for(reading.value.value, threshold);
    alert.emitted_at = reading.window.end;
    return alert;
}

WindowEvaluation evaluate_window(
    const WindowCloseResult& closed,
    const std::map<std::string, std::vector<ScoreDistribution>>& histories,
    const MonitorConfig& config) {
    WindowEvaluation eval;
    eval.window = closed.window;

    for (const auto& [model, count] : closed.insufficient) {
        eval.coverage_notes.push_back("window " + closed.window.label + ": model " + model +
                                      " INSUFFICIENT (" + std::to_string(count) + " < " +
                                      std::to_string(config.window.min_samples) + " samples)");
    }

    if (closed.distributions.find(config.main_model) == closed.distributions.end()) {
        eval.coverage_notes.push_back("window " + closed.window.label + ": main model " +
                                      config.main_model +
                                      " absent, predictive divergence skipped");
    } else {
        PredictiveResult predictive = predictive_divergence(closed.distributions, config);
        for (auto& reading : predictive.readings) reading.window = closed.window;
        for (const auto& pair : predictive.skipped_pairs) {
            eval.coverage_notes.push_back("window " + closed.window.label + ": pair " + pair +
                                          " skipped (member missing)");
        }
        if (auto alert = build_predictive_alert(predictive.readings, config.predictive_threshold)) {
            eval.alerts.push_back(std::move(*alert));
        }
        eval.readings.insert(eval.readings.end(), predictive.readings.begin(),
                             predictive.readings.end());
    }

    for (const auto& [model, dist] : closed.distributions) {
        auto hist_it = histories.find(model);
        if (hist_it == histories.end() || hist_it->second.empty()) continue;
        auto reading = temporal_stability(model, dist, hist_it->second, config);
        if (!reading) continue;
        reading->window = closed.window;
        eval.readings.push_back(*reading);
        if (auto alert = build_temporal_alert(*reading, config.temporal_threshold)) {
            eval.alerts.push_back(std::move(*alert));
        }
    }

    return eval;
}

}  // namespace driftwatch
