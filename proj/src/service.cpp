#include "driftwatch/service.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "driftwatch/report.hpp"
#include "driftwatch/snapshot.hpp"

namespace driftwatch {

namespace {

struct ParsedBatch {
    std::vector<PredictionEvent> events;
    nlohmann::json errors = nlohmann::json::array();
};

// Validates one JSON record against the event schema; positioned errors
// carry the record's index within the batch.
void parse_record(const nlohmann::json& record, std::size_t index, ParsedBatch& batch) {
    auto fail = [&](const std::string& message) {
        batch.errors.push_back({{"index", index}, {"error", message}});
    };
    if (!record.is_object()) {
        fail("record must be a JSON object");
        return;
    }
    for (const std::string field : {"study_id", "timestamp", "model_id", "class_label"}) {
        if (!record.contains(field) || !record[field].is_string() ||
            record[field].get<std::string>().empty()) {
            fail("missing or non-string field '" + field + "'");
            return;
        }
    }
    if (!record.contains("score") || !record["score"].is_number()) {
        fail("missing or non-numeric field 'score'");
        return;
    }

    double score = record["score"].get<double>();
    if (!(score >= 0.0 && score <= 1.0)) {
        fail("score out of range: " + std::to_string(score) + " not in [0, 1]");
        return;
    }
    auto ts = parse_iso8601(record["timestamp"].get<std::string>());
    if (!ts) {
        fail("unparsable timestamp '" + record["timestamp"].get<std::string>() + "'");
        return;
    }

    batch.events.push_back({record["study_id"].get<std::string>(), *ts,
                            record["model_id"].get<std::string>(),
                            record["class_label"].get<std::string>(), score});
}

}  // namespace

MonitorService::MonitorService(Options options) : options_(std::move(options)) {
    options_.config.validate();
    if (options_.snapshot_path && !options_.fresh &&
        std::filesystem::exists(*options_.snapshot_path)) {
        engine_ = std::make_unique<MonitorEngine>(
            read_snapshot_file(*options_.snapshot_path, options_.config));
    } else {
        engine_ = std::make_unique<MonitorEngine>(options_.config);
    }
    server_ = std::make_unique<httplib::Server>();
    install_routes();
}

MonitorService::~MonitorService() = default;

std::string MonitorService::alerts_path() const {
    return (std::filesystem::path(options_.out_dir) / "alerts.jsonl").string();
}

void MonitorService::append_new_alerts_locked() {
    std::uint64_t offset = engine_->alert_log_offset();
    std::uint64_t total = engine_->total_alerts();
    if (total <= offset) return;

    std::filesystem::create_directories(options_.out_dir);
    std::ofstream log(alerts_path(), std::ios::app);
    std::uint64_t seen = 0;
    for (const auto& record : engine_->evaluations()) {
        for (const auto& alert : record.evaluation.alerts) {
            if (seen++ < offset) continue;
            log << alert_to_display_json(alert, record.class_label).dump() << '\n';
        }
    }
    engine_->set_alert_log_offset(total);
}

void MonitorService::persist() {
    std::lock_guard<std::mutex> guard(mutex_);
    if (options_.snapshot_path) {
        write_snapshot_file(*options_.snapshot_path, *engine_);
    }
}

void MonitorService::install_routes() {
    server_->Post("/v1/predictions", [this](const httplib::Request& req,
                                            httplib::Response& res) {
        nlohmann::json body;
        try {
            body = nlohmann::json::parse(req.body);
        } catch (const nlohmann::json::exception& e) {
            res.status = 400;
            res.set_content(nlohmann::json{{"errors", {{{"index", 0},
                                                        {"error", std::string("invalid JSON: ") +
                                                                      e.what()}}}}}
                                .dump(),
                            "application/json");
            return;
        }

        ParsedBatch batch;
        if (body.is_array()) {
            for (std::size_t i = 0; i < body.size(); ++i) parse_record(body[i], i, batch);
        } else {
            parse_record(body, 0, batch);
        }
        if (!batch.errors.empty()) {
            // Atomic batches: one bad record rejects the lot, so a retry
            // after fixing it cannot double-ingest the good ones.
            res.status = 400;
            res.set_content(nlohmann::json{{"errors", batch.errors}}.dump(),
                            "application/json");
            return;
        }

        nlohmann::json outcomes = nlohmann::json::object();
        {
            std::lock_guard<std::mutex> guard(mutex_);
            for (const auto& event : batch.events) {
                IngestOutcome outcome = engine_->ingest(event);
                std::string key = to_string(outcome);
                outcomes[key] = outcomes.value(key, 0) + 1;
            }
            append_new_alerts_locked();
        }
        res.status = 202;
        res.set_content(
            nlohmann::json{{"received", batch.events.size()}, {"outcomes", outcomes}}.dump(),
            "application/json");
    });

    server_->Get("/v1/status", [this](const httplib::Request&, httplib::Response& res) {
        std::lock_guard<std::mutex> guard(mutex_);
        nlohmann::json labels = nlohmann::json::object();
        for (const auto& status : engine_->open_windows()) {
            labels[status.class_label] = {{"current_window", status.window.label},
                                          {"window_start", format_iso8601(status.window.start)},
                                          {"model_counts", status.model_counts}};
        }
        const Diagnostics& d = engine_->diagnostics();
        nlohmann::json doc = {{"labels", labels},
                              {"windows_closed", engine_->evaluations().size()},
                              {"alerts", engine_->total_alerts()},
                              {"diagnostics",
                               {{"accepted", d.accepted},
                                {"duplicates", d.duplicates},
                                {"late_events", d.late_events},
                                {"pre_epoch", d.pre_epoch},
                                {"unregistered_model", d.unregistered_model},
                                {"out_of_domain", d.out_of_domain}}}};
        res.set_content(doc.dump(), "application/json");
    });

    server_->Get("/v1/readings", [this](const httplib::Request& req, httplib::Response& res) {
        std::lock_guard<std::mutex> guard(mutex_);
        std::optional<std::string> filter;
        if (req.has_param("window")) filter = req.get_param_value("window");

        nlohmann::json readings = nlohmann::json::array();
        for (const auto& record : engine_->evaluations()) {
            if (filter && record.evaluation.window.label != *filter) continue;
            for (const auto& reading : record.evaluation.readings) {
                readings.push_back(reading_to_display_json(reading, record.class_label));
            }
        }
        res.set_content(nlohmann::json{{"readings", readings}}.dump(), "application/json");
    });

    server_->Get("/v1/alerts", [this](const httplib::Request&, httplib::Response& res) {
        std::lock_guard<std::mutex> guard(mutex_);
        std::ostringstream out;
        for (const auto& record : engine_->evaluations()) {
            for (const auto& alert : record.evaluation.alerts) {
                out << alert_to_display_json(alert, record.class_label).dump() << '\n';
            }
        }
        res.set_content(out.str(), "application/x-ndjson");
    });
}

}  // namespace driftwatch
