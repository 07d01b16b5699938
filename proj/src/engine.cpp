#include "driftwatch/engine.hpp"

namespace driftwatch {

namespace {

std::string dedup_key(const PredictionEvent& e) {
    return e.study_id + '\x1f' + e.model_id + '\x1f' + e.class_label;
}

nlohmann::json window_to_json(const TimeWindow& w) {
    return {{"index", w.index},
            {"start", w.start.time_since_epoch().count()},
            {"end", w.end.time_since_epoch().count()},
            {"label", w.label}};
}

TimeWindow window_from_json(const nlohmann::json& j) {
    TimeWindow w;
    w.index = j.at("index").get<std::int64_t>();
    w.start = Timestamp{Duration{j.at("start").get<std::int64_t>()}};
    w.end = Timestamp{Duration{j.at("end").get<std::int64_t>()}};
    w.label = j.at("label").get<std::string>();
    return w;
}

nlohmann::json value_to_json(const DivergenceValue& v) {
    nlohmann::json j;
    j["kind"] = v.kind == DivergenceKind::KL ? "KL" : "JS";
    if (v.is_infinite()) {
        j["value"] = "INFINITE";
    } else {
        j["value"] = v.value;
    }
    j["smoothed"] = v.smoothed;
    return j;
}

DivergenceValue value_from_json(const nlohmann::json& j) {
    DivergenceValue v;
    v.kind = j.at("kind").get<std::string>() == "KL" ? DivergenceKind::KL : DivergenceKind::JS;
    if (j.at("value").is_string()) {
        v.value = DivergenceValue::infinite();
    } else {
        v.value = j.at("value").get<double>();
    }
    v.smoothed = j.at("smoothed").get<bool>();
    return v;
}

nlohmann::json reading_to_json(const DivergenceReading& r) {
    return {{"metric", to_string(r.metric)},
            {"model_a", r.model_a},
            {"model_b", r.model_b},
            {"window", window_to_json(r.window)},
            {"value", value_to_json(r.value)}};
}

DivergenceReading reading_from_json(const nlohmann::json& j) {
    DivergenceReading r;
    r.metric = j.at("metric").get<std::string>() == "PREDICTIVE" ? MetricKind::Predictive
                                                                 : MetricKind::Temporal;
    r.model_a = j.at("model_a").get<std::string>();
    r.model_b = j.at("model_b").get<std::string>();
    r.window = window_from_json(j.at("window"));
    r.value = value_from_json(j.at("value"));
    return r;
}

nlohmann::json alert_to_json(const Alert& a) {
    nlohmann::json readings = nlohmann::json::array();
    for (const auto& r : a.readings) readings.push_back(reading_to_json(r));
    return {{"window", window_to_json(a.window)},
            {"metric", to_string(a.metric)},
            {"readings", readings},
            {"suspect", a.suspect},
            {"threshold", a.threshold},
            {"severity", to_string(a.severity)},
            {"emitted_at", a.emitted_at.time_since_epoch().count()}};
}

Alert alert_from_json(const nlohmann::json& j) {
    Alert a;
    a.window = window_from_json(j.at("window"));
    a.metric = j.at("metric").get<std::string>() == "PREDICTIVE" ? MetricKind::Predictive
                                                                 : MetricKind::Temporal;
    for (const auto& r : j.at("readings")) a.readings.push_back(reading_from_json(r));
    a.suspect = j.at("suspect").get<std::string>();
    a.threshold = j.at("threshold").get<double>();
    a.severity =
        j.at("severity").get<std::string>() == "CRITICAL" ? Severity::Critical : Severity::Warn;
    a.emitted_at = Timestamp{Duration{j.at("emitted_at").get<std::int64_t>()}};
    return a;
}

nlohmann::json distribution_to_json(const ScoreDistribution& d) {
    return {{"mass", std::vector<double>(d.mass().begin(), d.mass().end())},
            {"samples", d.sample_count()}};
}

ScoreDistribution distribution_from_json(const nlohmann::json& j, const BinningSpec& binning) {
    return ScoreDistribution::from_mass(binning, j.at("mass").get<std::vector<double>>(),
                                        j.at("samples").get<std::uint64_t>());
}

}  // namespace

std::string to_string(IngestOutcome outcome) {
    switch (outcome) {
        case IngestOutcome::Accepted: return "accepted";
        case IngestOutcome::Duplicate: return "duplicate";
        case IngestOutcome::Late: return "late";
        case IngestOutcome::PreEpoch: return "pre_epoch";
        case IngestOutcome::UnregisteredModel: return "unregistered_model";
        case IngestOutcome::OutOfDomain: return "out_of_domain";
    }
    return "unknown";
}

MonitorEngine::MonitorEngine(MonitorConfig config) : config_(std::move(config)) {
    config_.validate();
}

IngestOutcome MonitorEngine::ingest(const PredictionEvent& event) {
    if (event.timestamp < config_.window.origin) {
        ++diagnostics_.pre_epoch;
        return IngestOutcome::PreEpoch;
    }
    if (!config_.is_registered(event.model_id)) {
        ++diagnostics_.unregistered_model;
        return IngestOutcome::UnregisteredModel;
    }
    if (!(event.score >= config_.binning.domain_low &&
          event.score <= config_.binning.domain_high)) {
        ++diagnostics_.out_of_domain;
        return IngestOutcome::OutOfDomain;
    }
    if (seen_keys_.count(dedup_key(event))) {
        ++diagnostics_.duplicates;
        return IngestOutcome::Duplicate;
    }

    TimeWindow target = assign_window(event.timestamp, config_.window);
    LabelState& state = labels_[event.class_label];

    bool late = state.open ? target.index < state.open->window().index
                           : target.index <= state.watermark;
    if (late) {
        ++diagnostics_.late_events;
        return IngestOutcome::Late;
    }

    if (state.open && target.index > state.open->window().index) {
        close_and_evaluate(event.class_label, state);
    }
    if (!state.open) {
        state.open.emplace(target, config_.binning);
    }

    state.open->add(event);
    seen_keys_.insert(dedup_key(event));
    ++diagnostics_.accepted;
    return IngestOutcome::Accepted;
}

void MonitorEngine::close_and_evaluate(const std::string& label, LabelState& state) {
    std::map<std::string, std::uint64_t> counts;
    for (const auto& [model, hist] : state.open->histograms()) counts[model] = hist.total;

    WindowCloseResult closed = state.open->close(config_.window);
    WindowEvaluation eval = evaluate_window(closed, state.histories, config_);

    for (const auto& reading : eval.readings) {
        if (reading.metric != MetricKind::Predictive) continue;
        std::string key = label + '/' + reading.pair_key();
        predictive_baseline_.emplace(key, reading.value.value);  // first reading wins
    }

    EvaluationRecord record;
    record.class_label = label;
    record.evaluation = std::move(eval);
    record.model_counts = std::move(counts);
    record.insufficient = closed.insufficient;
    evaluations_.push_back(std::move(record));

    for (const auto& [model, dist] : closed.distributions) {
        state.histories[model].push_back(dist);
    }
    state.watermark = closed.window.index;
    state.open.reset();
}

void MonitorEngine::finalize() {
    for (auto& [label, state] : labels_) {
        if (state.open) close_and_evaluate(label, state);
    }
}

std::vector<OpenWindowStatus> MonitorEngine::open_windows() const {
    std::vector<OpenWindowStatus> out;
    for (const auto& [label, state] : labels_) {
        if (!state.open) continue;
        OpenWindowStatus status;
        status.class_label = label;
        status.window = state.open->window();
        for (const auto& [model, hist] : state.open->histograms()) {
            status.model_counts[model] = hist.total;
        }
        out.push_back(std::move(status));
    }
    return out;
}

std::uint64_t MonitorEngine::total_alerts() const {
    std::uint64_t n = 0;
    for (const auto& record : evaluations_) n += record.evaluation.alerts.size();
    return n;
}

bool MonitorEngine::has_critical_alert() const {
    for (const auto& record : evaluations_) {
        for (const auto& alert : record.evaluation.alerts) {
            if (alert.severity == Severity::Critical) return true;
        }
    }
    return false;
}

nlohmann::json MonitorEngine::state_to_json() const {
    nlohmann::json labels = nlohmann::json::object();
    for (const auto& [label, state] : labels_) {
        nlohmann::json j;
        j["watermark"] = state.watermark;
        if (state.open) {
            nlohmann::json hists = nlohmann::json::object();
            for (const auto& [model, hist] : state.open->histograms()) {
                hists[model] = {{"counts", hist.counts}, {"total", hist.total}};
            }
            j["open"] = {{"window", window_to_json(state.open->window())},
                         {"histograms", hists}};
        } else {
            j["open"] = nullptr;
        }
        nlohmann::json histories = nlohmann::json::object();
        for (const auto& [model, dists] : state.histories) {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& d : dists) arr.push_back(distribution_to_json(d));
            histories[model] = std::move(arr);
        }
        j["histories"] = std::move(histories);
        labels[label] = std::move(j);
    }

    nlohmann::json evaluations = nlohmann::json::array();
    for (const auto& record : evaluations_) {
        nlohmann::json readings = nlohmann::json::array();
        for (const auto& r : record.evaluation.readings) readings.push_back(reading_to_json(r));
        nlohmann::json alerts = nlohmann::json::array();
        for (const auto& a : record.evaluation.alerts) alerts.push_back(alert_to_json(a));
        evaluations.push_back({{"class_label", record.class_label},
                               {"window", window_to_json(record.evaluation.window)},
                               {"readings", readings},
                               {"alerts", alerts},
                               {"coverage_notes", record.evaluation.coverage_notes},
                               {"model_counts", record.model_counts},
                               {"insufficient", record.insufficient}});
    }

    return {{"labels", labels},
            {"dedup", std::vector<std::string>(seen_keys_.begin(), seen_keys_.end())},
            {"diagnostics",
             {{"accepted", diagnostics_.accepted},
              {"duplicates", diagnostics_.duplicates},
              {"late_events", diagnostics_.late_events},
              {"pre_epoch", diagnostics_.pre_epoch},
              {"unregistered_model", diagnostics_.unregistered_model},
              {"out_of_domain", diagnostics_.out_of_domain}}},
            {"evaluations", evaluations},
            {"predictive_baseline", predictive_baseline_},
            {"alert_log_offset", alert_log_offset_}};
}

MonitorEngine MonitorEngine::state_from_json(const nlohmann::json& state, MonitorConfig config) {
    MonitorEngine engine(std::move(config));
    try {
        for (const auto& [label, j] : state.at("labels").items()) {
            LabelState ls;
            ls.watermark = j.at("watermark").get<std::int64_t>();
            if (!j.at("open").is_null()) {
                TimeWindow w = window_from_json(j.at("open").at("window"));
                ls.open.emplace(w, engine.config_.binning);
                for (const auto& [model, h] : j.at("open").at("histograms").items()) {
                    ScoreHistogram hist = ScoreHistogram::empty(engine.config_.binning);
                    hist.counts = h.at("counts").get<std::vector<std::uint64_t>>();
                    hist.total = h.at("total").get<std::uint64_t>();
                    ls.open->restore_histogram(model, std::move(hist));
                }
            }
            for (const auto& [model, arr] : j.at("histories").items()) {
                for (const auto& d : arr) {
                    ls.histories[model].push_back(
                        distribution_from_json(d, engine.config_.binning));
                }
            }
            engine.labels_.emplace(label, std::move(ls));
        }

        for (const auto& key : state.at("dedup")) {
            engine.seen_keys_.insert(key.get<std::string>());
        }

        const auto& diag = state.at("diagnostics");
        engine.diagnostics_.accepted = diag.at("accepted").get<std::uint64_t>();
        engine.diagnostics_.duplicates = diag.at("duplicates").get<std::uint64_t>();
        engine.diagnostics_.late_events = diag.at("late_events").get<std::uint64_t>();
        engine.diagnostics_.pre_epoch = diag.at("pre_epoch").get<std::uint64_t>();
        engine.diagnostics_.unregistered_model = diag.at("unregistered_model").get<std::uint64_t>();
        engine.diagnostics_.out_of_domain = diag.at("out_of_domain").get<std::uint64_t>();

        for (const auto& e : state.at("evaluations")) {
            EvaluationRecord record;
            record.class_label = e.at("class_label").get<std::string>();
            record.evaluation.window = window_from_json(e.at("window"));
            for (const auto& r : e.at("readings")) {
                record.evaluation.readings.push_back(reading_from_json(r));
            }
            for (const auto& a : e.at("alerts")) {
                record.evaluation.alerts.push_back(alert_from_json(a));
            }
            record.evaluation.coverage_notes =
                e.at("coverage_notes").get<std::vector<std::string>>();
            record.model_counts =
                e.at("model_counts").get<std::map<std::string, std::uint64_t>>();
            record.insufficient =
                e.at("insufficient").get<std::map<std::string, std::uint64_t>>();
            engine.evaluations_.push_back(std::move(record));
        }

        engine.predictive_baseline_ =
            state.at("predictive_baseline").get<std::map<std::string, double>>();
        engine.alert_log_offset_ = state.at("alert_log_offset").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw SnapshotError(std::string("malformed snapshot state: ") + e.what());
    }
    return engine;
}

}  // namespace driftwatch
